#include "bosegas/grid.hpp"

#include "bosegas/errors.hpp"

#include <doctest.h>

using namespace bosegas;

TEST_CASE("index and unindex are inverses over the whole box") {
    const Grid g = Grid::box(8, 12, 10, 0.5);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto c = g.unindex(flat);
        CHECK(g.index(c[0], c[1], c[2]) == flat);
    }
}

TEST_CASE("row major layout: last axis fastest") {
    const Grid g = Grid::box(8, 8, 8, 1.0);
    CHECK(g.index(0, 0, 1) == 1);
    CHECK(g.index(0, 1, 0) == 8);
    CHECK(g.index(1, 0, 0) == 64);
}

TEST_CASE("wrap is a true modulus, negative offsets included") {
    const Grid g = Grid::line(10, 1.0);
    CHECK(g.wrap(10, 0) == 0);
    CHECK(g.wrap(-1, 0) == 9);
    CHECK(g.wrap(-10, 0) == 0);
    CHECK(g.wrap(23, 0) == 3);
}

TEST_CASE("minimum image offset never exceeds half the box") {
    const Grid g = Grid::line(10, 1.0);
    CHECK(g.min_image(7, 0) == -3);
    CHECK(g.min_image(-7, 0) == 3);
    CHECK(g.min_image(3, 0) == 3);
    CHECK(g.min_image(5, 0) == 5); // tie keeps the positive image
}

TEST_CASE("positions are cell centers symmetric about the origin") {
    const Grid g = Grid::line(8, 0.5);
    CHECK(g.position(0, 0) == doctest::Approx(-1.75));
    CHECK(g.position(7, 0) == doctest::Approx(1.75));
    CHECK(g.position(0, 0) + g.position(7, 0) == doctest::Approx(0.0));
    CHECK(g.extent(0) == doctest::Approx(4.0));
}

TEST_CASE("volumes multiply out") {
    const Grid g = Grid::plane(16, 8, 0.25);
    CHECK(g.cell_volume() == doctest::Approx(0.0625));
    CHECK(g.volume() == doctest::Approx(16 * 8 * 0.0625));
    CHECK(g.size() == 128);
}

TEST_CASE("validate rejects degenerate shapes") {
    Grid g = Grid::line(8, 1.0);
    g.spacing = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);

    // a used axis with fewer than 8 points cannot resolve anything
    CHECK_THROWS_AS(Grid::line(4, 1.0).validate(), ValidationError);

    // unused axes must stay at extent one
    Grid h = Grid::line(8, 1.0);
    h.shape[1] = 3;
    CHECK_THROWS_AS(h.validate(), ValidationError);

    CHECK_THROWS_AS(Grid::box(0, 8, 8, 1.0).validate(), ValidationError);
}

TEST_CASE("same_shape compares geometry, not periodicity") {
    const Grid a = Grid::plane(8, 8, 0.5);
    Grid b = Grid::plane(8, 8, 0.5);
    CHECK(a.same_shape(b));
    b.spacing = 0.25;
    CHECK(!a.same_shape(b));
}

TEST_CASE("field reductions and the lattice integral") {
    Field f(Grid::line(8, 0.5), 2.0);
    CHECK(f.sum() == doctest::Approx(16.0));
    CHECK(f.mean() == doctest::Approx(2.0));
    CHECK(f.integral() == doctest::Approx(8.0)); // sum * h
    f[3] = -5.0;
    CHECK(f.min() == -5.0);
    CHECK(f.max() == 2.0);
}

TEST_CASE("check_consistent catches a size mismatch") {
    Field f(Grid::line(8, 0.5));
    f.values.pop_back();
    CHECK_THROWS_AS(f.check_consistent(), ShapeMismatch);
}
