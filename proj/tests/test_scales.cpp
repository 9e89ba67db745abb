#include "bosegas/scales.hpp"

#include "bosegas/constants.hpp"
#include "bosegas/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace bosegas;

namespace {

PhysicalParams natural_1d(double kappa = 1.0) {
    PhysicalParams p;
    p.dimension = 1;
    p.disorder = DisorderSpec::uncorrelated(kappa);
    return p;
}

} // namespace

TEST_CASE("unit-strength white noise pins the collision length at one") {
    for (int d : {1, 2, 3}) {
        PhysicalParams p;
        p.dimension = d;
        p.disorder = DisorderSpec::uncorrelated(1.0);
        const auto s = derive_scales(p);
        CHECK(s.larkin_length == doctest::Approx(1.0));
        CHECK(s.larkin_energy == doctest::Approx(0.5));
        CHECK(s.disorder_class == DisorderClass::Uncorrelated);
    }
}

TEST_CASE("collision length carries the exact power of the noise strength") {
    // L_d = (hbar^4 / m^2 kappa^2)^{1/(4-d)}
    for (int d : {1, 2, 3}) {
        PhysicalParams p;
        p.dimension = d;
        p.hbar = 1.3;
        p.mass = 0.7;
        p.disorder = DisorderSpec::uncorrelated(2.1);
        const auto s = derive_scales(p);
        const double expect =
            std::pow(std::pow(1.3, 4) / (0.7 * 0.7 * 2.1 * 2.1), 1.0 / (4.0 - d));
        CHECK(s.larkin_length == doctest::Approx(expect).epsilon(1e-13));
        CHECK(s.larkin_energy ==
              doctest::Approx(1.3 * 1.3 / (2.0 * 0.7 * expect * expect)).epsilon(1e-13));
    }
}

TEST_CASE("smooth disorder maps to the exact white-noise strength") {
    // d = 3 closed form: L = 3 hbar^4 / (4 pi m^2 U0^2 b^3)
    const double u0 = 0.37, b = 1.9;
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::gaussian(u0, b);
    const auto s = derive_scales(p);
    CHECK(s.larkin_length ==
          doctest::Approx(3.0 / (4.0 * pi * u0 * u0 * b * b * b)).epsilon(1e-13));

    // same rule for the Lorentz profile
    p.disorder = DisorderSpec::lorentz(u0, b);
    CHECK(derive_scales(p).larkin_length == doctest::Approx(s.larkin_length));
}

TEST_CASE("amplitude per variant") {
    CHECK(DisorderSpec::gaussian(0.4, 2.0).amplitude(3) == 0.4);
    CHECK(DisorderSpec::lorentz(0.4, 2.0).amplitude(1) == 0.4);
    // site variance diverges for the rational spectrum; the effective
    // amplitude is kappa b^{-d/2}
    CHECK(DisorderSpec::ornstein_zernike(3.0, 4.0).amplitude(2) == doctest::Approx(0.75));
    CHECK_THROWS_AS(DisorderSpec::uncorrelated(1.0).amplitude(1), WrongDisorderClass);
}

TEST_CASE("critical density for unit couplings") {
    // d = 1, kappa = 1, g = 1: n_c = Omega_1 / ((4-1) * 1 * 1 * 1) = 2/3
    auto p = natural_1d();
    p.coupling_g = 1.0;
    CHECK(derive_scales(p).require_critical_density() == doctest::Approx(2.0 / 3.0));

    // d = 3 with scattering length: n_c = 1/(3 L^2 a)
    PhysicalParams q;
    q.dimension = 3;
    q.disorder = DisorderSpec::uncorrelated(0.8);
    q.scattering_length = 0.05;
    const auto s = derive_scales(q);
    const double L = s.larkin_length;
    CHECK(s.require_critical_density() == doctest::Approx(1.0 / (3.0 * L * L * 0.05)).epsilon(1e-13));
}

TEST_CASE("strongly correlated branch switches the critical density formula") {
    PhysicalParams p;
    p.dimension = 3;
    p.coupling_g = 1.0;
    // b far above L: smooth limit
    p.disorder = DisorderSpec::gaussian(2.0, 50.0);
    auto s = derive_scales(p);
    REQUIRE(s.disorder_class == DisorderClass::StronglyCorrelated);
    CHECK(s.require_critical_density() == doctest::Approx(std::sqrt(3.0) * pi * 2.0));

    p.dimension = 1;
    s = derive_scales(p);
    REQUIRE(s.disorder_class == DisorderClass::StronglyCorrelated);
    CHECK(s.require_critical_density() == doctest::Approx(unit_ball_volume(1) / 1.0 * 2.0));
}

TEST_CASE("quantum length prefactor") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::gaussian(1.0, 0.01); // weakly correlated is fine
    CHECK(derive_scales(p).require_quantum_length() ==
          doctest::Approx(std::pow(3.0 / (4.0 * pi), 0.25)));
    p.dimension = 1;
    CHECK(derive_scales(p).require_quantum_length() == doctest::Approx(1.0));

    CHECK_THROWS_AS(derive_scales(natural_1d()).require_quantum_length(), WrongDisorderClass);
}

TEST_CASE("healing and oscillator lengths from optional inputs") {
    auto p = natural_1d();
    p.coupling_g = 2.0;
    p.mean_density = 0.25;
    p.trap_frequency = 4.0;
    const auto s = derive_scales(p);
    CHECK(s.require_healing_length() == doctest::Approx(1.0)); // 1/sqrt(2*2*0.25)
    CHECK(s.require_oscillator_length() == doctest::Approx(0.5));

    CHECK_THROWS_AS(derive_scales(natural_1d()).require_healing_length(), MissingParameter);
    CHECK_THROWS_AS(derive_scales(natural_1d()).require_oscillator_length(), MissingTrap);
}

TEST_CASE("coupling resolution from the scattering length") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::uncorrelated(1.0);
    p.scattering_length = 0.1;
    CHECK(p.coupling() == doctest::Approx(4.0 * pi * 0.1));

    p.dimension = 1;
    CHECK(p.coupling() == doctest::Approx(2.0 / 0.1));

    p.dimension = 2;
    CHECK(!p.has_coupling());
    CHECK_THROWS_AS(p.coupling(), MissingParameter);
    p.coupling_g = 3.0; // explicit value always wins
    CHECK(p.coupling() == 3.0);
}

TEST_CASE("class boundary emits a warning, not an error") {
    PhysicalParams p;
    p.dimension = 1;
    p.disorder = DisorderSpec::gaussian(1.0, 1.0); // log(b/L1) = (1/3) log 2 > 0.1
    auto s = derive_scales(p);
    CHECK(s.warnings.empty());

    // self-consistent boundary b = L1(b) sits at b = 2^{-1/4}
    p.disorder.corr_length = 0.84;
    s = derive_scales(p);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].code == "disorder_class_boundary");
}

TEST_CASE("validation rejects nonsense inputs") {
    CHECK_THROWS_AS(derive_scales(natural_1d(0.0)), NonPositiveInput);
    auto p = natural_1d();
    p.dimension = 4;
    CHECK_THROWS_AS(derive_scales(p), InvalidDimension);
    p = natural_1d();
    p.mean_density = 0.1;
    p.particle_count = 100.0;
    CHECK_THROWS_AS(derive_scales(p), ValidationError);
    CHECK_THROWS_AS(DisorderSpec::gaussian(1.0, 0.0).validate(1), NonPositiveInput);
}

TEST_CASE("dimensional reduction preserves the collision length rule") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::uncorrelated(0.1); // L = 100
    p.scattering_length = 0.01;
    p.transverse_frequency = 1.0; // ell_perp = 1
    const auto s3 = derive_scales(p);
    REQUIRE(s3.larkin_length == doctest::Approx(100.0));

    const auto red = reduced_dimension_map(p, s3, 1);
    // L_1 = (L ell_perp^2)^{1/3}
    CHECK(red.scales.larkin_length == doctest::Approx(std::pow(100.0, 1.0 / 3.0)).epsilon(1e-12));
    // a_1 = ell_perp^2 / a and g_1 = 2 hbar^2 / (m a_1)
    CHECK(red.params.scattering_length.value() == doctest::Approx(100.0));
    CHECK(red.params.coupling_g.value() == doctest::Approx(0.02));
    CHECK(red.params.coupling() == doctest::Approx(0.02));
    CHECK(red.validity_ok);
    CHECK(red.margin_low == doctest::Approx(std::log(1.0 / 0.01)));
    CHECK(red.margin_high == doctest::Approx(std::log(100.0)));
}

TEST_CASE("reduction to the same dimension is the identity") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::uncorrelated(0.5);
    p.scattering_length = 0.02;
    p.mean_density = 0.3;
    const auto s3 = derive_scales(p);

    const auto red = reduced_dimension_map(p, s3, 3);
    CHECK(red.params.dimension == 3);
    CHECK(red.params.disorder.kappa == p.disorder.kappa);
    CHECK(red.params.scattering_length.value() == p.scattering_length.value());
    CHECK(red.params.mean_density.value() == p.mean_density.value());
    CHECK(red.scales.larkin_length == s3.larkin_length);
    CHECK(red.scales.require_critical_density() == s3.require_critical_density());
    CHECK(red.validity_ok);
}

TEST_CASE("reduction guards its domain") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::uncorrelated(0.1);
    const auto s3 = derive_scales(p);
    CHECK_THROWS_AS(reduced_dimension_map(p, s3, 0), InvalidDimension);
    CHECK_THROWS_AS(reduced_dimension_map(p, s3, 1), MissingParameter); // no omega_perp

    auto p1 = natural_1d();
    CHECK_THROWS_AS(reduced_dimension_map(p1, derive_scales(p1), 1), InvalidDimension);
}

TEST_CASE("reduction rescaling keeps density times coupling invariant at d=2") {
    PhysicalParams p;
    p.dimension = 3;
    p.disorder = DisorderSpec::uncorrelated(0.1);
    p.coupling_g = 0.7;
    p.mean_density = 0.2;
    p.transverse_frequency = 4.0; // ell_perp = 1/2
    const auto s3 = derive_scales(p);
    const auto red = reduced_dimension_map(p, s3, 2);
    // n_2 = n Omega_1 ell_perp and g_2 = g / (Omega_1 ell_perp): n g invariant
    CHECK(red.params.mean_density.value() * red.params.coupling_g.value() ==
          doctest::Approx(0.2 * 0.7).epsilon(1e-13));
    CHECK(!red.params.scattering_length.has_value());
}
