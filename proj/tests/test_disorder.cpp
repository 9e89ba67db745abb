#include "bosegas/disorder.hpp"

#include "bosegas/constants.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace bosegas;

TEST_CASE("spectral densities at spot values") {
    const auto white = DisorderSpec::uncorrelated(1.5);
    CHECK(correlator_spectrum(white, 0.0, 1) == doctest::Approx(2.25));
    CHECK(correlator_spectrum(white, 3.0, 3) == doctest::Approx(2.25)); // flat

    const auto oz = DisorderSpec::ornstein_zernike(2.0, 0.5);
    CHECK(correlator_spectrum(oz, 2.0, 1) == doctest::Approx(2.0)); // 4/(1+1)
    CHECK(correlator_spectrum(oz, 0.0, 3) == doctest::Approx(4.0));

    const auto gauss = DisorderSpec::gaussian(1.0, 2.0);
    CHECK(correlator_spectrum(gauss, 0.0, 1) == doctest::Approx(std::sqrt(2.0 * pi) * 2.0));
    CHECK(correlator_spectrum(gauss, 0.5, 3) ==
          doctest::Approx(std::pow(2.0 * pi, 1.5) * 8.0 * std::exp(-0.5)));

    const auto lor = DisorderSpec::lorentz(1.0, 2.0);
    CHECK(correlator_spectrum(lor, 0.5, 1) == doctest::Approx(pi * 2.0 * std::exp(-1.0)));
    CHECK(correlator_spectrum(lor, 0.5, 3) ==
          doctest::Approx(2.0 * pi * pi * 4.0 * std::exp(-1.0) / 0.5));
    // d = 2 kernel is the modified Bessel K0; K0(1) = 0.421024...
    CHECK(correlator_spectrum(lor, 0.5, 2) ==
          doctest::Approx(2.0 * pi * 4.0 * 0.42102443824070834).epsilon(1e-12));
    CHECK(std::isinf(correlator_spectrum(lor, 0.0, 3)));

    CHECK_THROWS_AS(correlator_spectrum(white, -1.0, 1), NonPositiveInput);
}

TEST_CASE("synthesis is a pure function of spec, grid and seed") {
    const auto spec = DisorderSpec::gaussian(1.0, 1.0);
    const auto grid = Grid::line(128, 0.25);
    const Seed seed{7, 3};
    const auto a = synthesize(spec, grid, seed);
    const auto b = synthesize(spec, grid, seed);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);

    const auto c = synthesize(spec, grid, seed.with_realization(4));
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += std::abs(a[i] - c[i]);
    CHECK(diff > 1.0);
}

TEST_CASE("white noise on the lattice has variance kappa^2 / h") {
    const auto spec = DisorderSpec::uncorrelated(1.0);
    const auto grid = Grid::line(1024, 0.5);

    // exact lattice covariance: a delta spike at zero lag
    const auto cov = target_covariance(spec, grid);
    CHECK(cov[0] == doctest::Approx(2.0).epsilon(1e-12));
    for (std::size_t r = 1; r < cov.size(); ++r) CHECK(std::abs(cov[r]) < 1e-12);

    std::vector<double> sites;
    for (std::uint64_t r = 0; r < 8; ++r) {
        const auto u = synthesize(spec, grid, Seed{11, r});
        sites.insert(sites.end(), u.values.begin(), u.values.end());
    }
    const double m = stats::mean(sites);
    const double v = stats::variance(sites);
    CHECK(std::abs(m) < 4.0 * std::sqrt(2.0 / static_cast<double>(sites.size())));
    CHECK(v == doctest::Approx(2.0).epsilon(0.06));

    // fourth moment consistent with a Gaussian ensemble
    double m4 = 0.0;
    for (double x : sites) m4 += std::pow(x - m, 4);
    m4 /= static_cast<double>(sites.size());
    CHECK(m4 / (v * v) == doctest::Approx(3.0).epsilon(0.12));
}

TEST_CASE("smooth correlator on a fine grid matches the continuum law") {
    // K(r) = U0^2 exp(-r^2 / 2 b^2); truncation and wrap errors are ~ 1e-12
    const auto spec = DisorderSpec::gaussian(1.3, 2.0);
    const auto grid = Grid::line(512, 0.25);
    const auto cov = target_covariance(spec, grid);
    CHECK(cov[0] == doctest::Approx(1.69).epsilon(1e-9));
    CHECK(cov[8] / cov[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-9)); // r = b
    CHECK(cov[16] / cov[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-9)); // r = 2b

    // lattice covariance is symmetric under lag negation
    for (std::size_t r = 1; r < 20; ++r)
        CHECK(cov[r] == doctest::Approx(cov[grid.size() - r]).epsilon(1e-12));
}

TEST_CASE("measured correlator agrees with its target within errors") {
    const auto spec = DisorderSpec::gaussian(1.0, 1.0);
    const auto grid = Grid::line(256, 0.25);
    const auto est = measure_correlator(spec, grid, Seed{21, 0}, 64, 2.5);
    REQUIRE(est.realizations == 64);
    REQUIRE(est.distance.size() == est.value.size());
    REQUIRE(est.target.size() == est.value.size());
    for (std::size_t s = 0; s < est.value.size(); ++s) {
        REQUIRE(est.std_error[s] > 0.0);
        CHECK(std::abs(est.value[s] - est.target[s]) < 3.0 * est.std_error[s]);
    }
    CHECK(std::abs(est.mean_field) < 4.0 * est.mean_field_error);
    CHECK(est.distance[0] == 0.0);
    CHECK(est.multiplicity[0] == 1);
}

TEST_CASE("correlator measurement is independent of the thread count") {
    const auto spec = DisorderSpec::ornstein_zernike(1.0, 1.0);
    const auto grid = Grid::line(128, 0.25);
    const auto one = measure_correlator(spec, grid, Seed{5, 0}, 12, 2.0, 1);
    const auto three = measure_correlator(spec, grid, Seed{5, 0}, 12, 2.0, 3);
    REQUIRE(one.value.size() == three.value.size());
    for (std::size_t s = 0; s < one.value.size(); ++s) {
        CHECK(one.value[s] == three.value[s]);
        CHECK(one.std_error[s] == three.std_error[s]);
    }
}

TEST_CASE("long-ranged variant drops its divergent zero mode") {
    const auto spec = DisorderSpec::lorentz(1.0, 1.0);
    const auto grid = Grid::plane(32, 32, 0.25);
    const auto u = synthesize(spec, grid, Seed{3, 0});
    CHECK(u.size() == grid.size());
    const auto cov = target_covariance(spec, grid);
    for (double c : cov) CHECK(std::isfinite(c));
}

TEST_CASE("accumulator matches the one-shot estimator") {
    const auto spec = DisorderSpec::gaussian(1.0, 1.0);
    const auto grid = Grid::line(128, 0.25);
    CorrelatorAccumulator acc(grid, 2.0);
    for (std::uint64_t r = 0; r < 6; ++r)
        acc.add(synthesize(spec, grid, Seed{9, r}));
    const auto a = acc.finalize(spec);
    const auto b = measure_correlator(spec, grid, Seed{9, 0}, 6, 2.0);
    REQUIRE(a.value.size() == b.value.size());
    for (std::size_t s = 0; s < a.value.size(); ++s)
        CHECK(a.value[s] == doctest::Approx(b.value[s]).epsilon(1e-12));
}

TEST_CASE("resolution and domain guards") {
    const auto spec = DisorderSpec::gaussian(1.0, 2.0);
    CHECK_THROWS_AS(synthesize(spec, Grid::line(64, 1.5), Seed{}), GridTooCoarse);
    CHECK_THROWS_AS(synthesize(spec, Grid::line(64, 0.5, false), Seed{}), ValidationError);
    CHECK_THROWS_AS(target_covariance(spec, Grid::line(64, 1.5)), GridTooCoarse);
    CHECK_THROWS_AS(measure_correlator(spec, Grid::line(64, 0.5), Seed{}, 1, 2.0),
                    EnsembleTooSmall);
    CHECK_THROWS_AS(CorrelatorAccumulator(Grid::line(64, 0.5), 0.0), NonPositiveInput);

    CorrelatorAccumulator acc(Grid::line(64, 0.5), 2.0);
    acc.add(synthesize(spec, Grid::line(64, 0.5), Seed{}));
    CHECK_THROWS_AS(acc.finalize(spec), EnsembleTooSmall);
    CHECK_THROWS_AS(acc.add(synthesize(spec, Grid::line(128, 0.5), Seed{})), ShapeMismatch);
}

TEST_CASE("short boxes are flagged, not rejected") {
    const auto spec = DisorderSpec::gaussian(1.0, 2.0);
    Warnings warn;
    synthesize(spec, Grid::line(32, 0.25), Seed{}, &warn); // extent 8 = 4b
    REQUIRE(warn.size() == 1);
    CHECK(warn[0].code == "short_box");

    warn.clear();
    synthesize(spec, Grid::line(128, 0.25), Seed{}, &warn); // extent 32 = 16b
    CHECK(warn.empty());
}

TEST_CASE("well frequency of a disorder dimple") {
    CHECK(effective_disorder_frequency(1.0, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(effective_disorder_frequency(2.0, 4.0, 0.5) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(effective_disorder_frequency(0.0, 1.0, 1.0), NonPositiveInput);
    CHECK_THROWS_AS(effective_disorder_frequency(1.0, -1.0, 1.0), NonPositiveInput);
}
