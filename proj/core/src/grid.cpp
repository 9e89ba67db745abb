#include "bosegas/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bosegas/errors.hpp"

namespace bosegas {

Grid Grid::line(int n, double h, bool periodic) {
    Grid g;
    g.dimension = 1;
    g.shape = {n, 1, 1};
    g.spacing = h;
    g.periodic = periodic;
    g.validate();
    return g;
}

Grid Grid::plane(int nx, int ny, double h, bool periodic) {
    Grid g;
    g.dimension = 2;
    g.shape = {nx, ny, 1};
    g.spacing = h;
    g.periodic = periodic;
    g.validate();
    return g;
}

Grid Grid::box(int nx, int ny, int nz, double h, bool periodic) {
    Grid g;
    g.dimension = 3;
    g.shape = {nx, ny, nz};
    g.spacing = h;
    g.periodic = periodic;
    g.validate();
    return g;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) v *= spacing;
    return v;
}

double Grid::volume() const { return static_cast<double>(size()) * cell_volume(); }

double Grid::extent(int axis) const { return shape[axis] * spacing; }

int Grid::min_image(int dc, int axis) const {
    const int n = shape[axis];
    dc %= n;
    if (dc > n / 2) dc -= n;
    if (dc < -(n - 1) / 2) dc += n;
    return dc;
}

void Grid::validate() const {
    if (dimension < 1 || dimension > 3)
        throw InvalidDimension("Grid: dimension must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
        if (a < dimension && shape[a] < 8)
            throw ValidationError("Grid: need at least 8 points per axis");
        if (a >= dimension && shape[a] != 1)
            throw ValidationError("Grid: unused axes must have extent 1");
    }
    if (size() > kMaxPoints)
        throw ValidationError("Grid: total point count exceeds the memory budget");
    if (!(spacing > 0.0)) throw NonPositiveInput("Grid: spacing must be > 0");
}

bool Grid::same_shape(const Grid& other) const {
    return dimension == other.dimension && shape == other.shape && spacing == other.spacing;
}

Field::Field(const Grid& g, double fill) : grid(g), values(g.size(), fill) {
    grid.validate();
}

double Field::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double Field::mean() const { return values.empty() ? 0.0 : sum() / static_cast<double>(values.size()); }

double Field::min() const { return *std::min_element(values.begin(), values.end()); }

double Field::max() const { return *std::max_element(values.begin(), values.end()); }

double Field::integral() const { return sum() * grid.cell_volume(); }

void Field::check_consistent() const {
    grid.validate();
    if (values.size() != grid.size())
        throw ShapeMismatch("Field: value count does not match grid size");
}

} // namespace bosegas
