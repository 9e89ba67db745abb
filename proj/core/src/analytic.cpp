#include "bosegas/analytic.hpp"

#include <cmath>

#include "bosegas/constants.hpp"

namespace bosegas {

namespace {

// Curvature of the reduced correlator at the origin, |h''(0)|, which sets the
// frequency of the harmonic well bottom. The Ornstein-Zernike correlator has a
// cusp there; its wells are treated with unit curvature.
double correlator_curvature(DisorderKind kind) {
    switch (kind) {
    case DisorderKind::GaussianCorrelated: return 1.0;
    case DisorderKind::LorentzCorrelated: return 2.0;
    case DisorderKind::OrnsteinZernike: return 1.0;
    case DisorderKind::Uncorrelated: break;
    }
    throw WrongDisorderClass("correlator_curvature: smooth disorder required");
}

double well_frequency_at(double energy, const PhysicalParams& params) {
    const double b = params.disorder.corr_length;
    const double curv = correlator_curvature(params.disorder.kind);
    return std::sqrt(std::abs(energy) * curv / (params.mass * b * b));
}

void require_uncorrelated_class(const Scales& scales, const char* who) {
    if (scales.disorder_class == DisorderClass::StronglyCorrelated)
        throw WrongDisorderClass(std::string(who) +
                                 ": white-noise well census needs b <= Larkin length");
}

void require_correlated_class(const Scales& scales, const char* who) {
    if (scales.disorder_class != DisorderClass::StronglyCorrelated)
        throw WrongDisorderClass(std::string(who) +
                                 ": smooth-disorder well census needs b > Larkin length");
}

} // namespace

double Prefactor::value(double x, int dimension) const {
    switch (mode) {
    case Mode::Unity:
        return 1.0;
    case Mode::Cardy: {
        if (!(x > 0.0)) throw NonPositiveInput("Prefactor: exponent argument must be positive");
        return dimension == 1 ? 1.0 : x;
    }
    case Mode::Custom:
        if (!(x > 0.0) && alpha != 0.0)
            throw NonPositiveInput("Prefactor: exponent argument must be positive");
        return std::pow(x, alpha);
    }
    return 1.0;
}

WellStats well_statistics_uncorrelated(double radius, const PhysicalParams& params,
                                       const Scales& scales, Prefactor f) {
    params.validate();
    if (!(radius > 0.0)) throw NonPositiveRadius("well_statistics_uncorrelated: R must be positive");
    require_uncorrelated_class(scales, "well_statistics_uncorrelated");

    const int d = params.dimension;
    const double x = std::pow(scales.larkin_length / radius, 4.0 - d);
    const double fval = f.value(x, d);

    WellStats w;
    w.radius = radius;
    w.prefactor_f = fval;
    w.energy_level = -params.hbar * params.hbar / (2.0 * params.mass * radius * radius);
    w.probability = fval * std::exp(-x);
    w.well_density = w.probability / std::pow(radius, d);
    w.spacing = radius * std::pow(w.probability, -1.0 / d);
    w.tunneling = std::exp(-w.spacing / radius);
    if (x < 1.0)
        w.warnings.push_back({"shallow_well",
                              "R exceeds the Larkin length; the rare-well census only "
                              "controls wells smaller than L_d"});
    return w;
}

FilledState filled_state_uncorrelated(double density, const PhysicalParams& params,
                                      const Scales& scales, Prefactor f) {
    params.validate();
    if (!(density > 0.0)) throw NonPositiveInput("filled_state_uncorrelated: n must be positive");
    require_uncorrelated_class(scales, "filled_state_uncorrelated");
    const double nc = scales.require_critical_density();
    if (density >= nc)
        throw DensityAboveCritical("filled_state_uncorrelated: n >= n_c, gas is delocalized");

    const int d = params.dimension;
    const double u = std::log(nc / density);
    const double p = 2.0 / (4.0 - d);
    const double fval = f.value(u, d);

    FilledState s;
    s.density = density;
    s.critical_density = nc;
    if (u < 1.0)
        s.warnings.push_back({"log_not_deep",
                              "n is within a factor e of n_c; the deep-tail expressions "
                              "are only marginally valid"});
    s.radius = scales.larkin_length * std::pow(u, -1.0 / (4.0 - d));
    s.level_energy = -scales.larkin_energy * std::pow(u, p);
    s.chemical_potential = s.level_energy;
    s.spacing = s.radius * std::pow(nc / (fval * density), 1.0 / d);
    s.tunneling = std::exp(-s.spacing / s.radius);
    s.occupation = nc * std::pow(s.radius, d) / fval;
    s.compressibility = density / (scales.larkin_energy * p * std::pow(u, p - 1.0));
    return s;
}

WellStats well_statistics_correlated(double energy, const PhysicalParams& params,
                                     const Scales& scales,
                                     std::optional<double> well_frequency) {
    params.validate();
    if (!(energy < 0.0))
        throw NonNegativeEnergy("well_statistics_correlated: level energy must be negative");
    require_correlated_class(scales, "well_statistics_correlated");

    const int d = params.dimension;
    const double u0 = params.disorder.amplitude(d);
    const double b = params.disorder.corr_length;
    const double e2 = energy * energy / (u0 * u0);

    WellStats w;
    w.energy_level = energy;
    w.radius = std::sqrt(2.0) * b * u0 / std::abs(energy);
    w.probability = std::exp(-0.5 * e2);
    w.well_density = w.probability / std::pow(b, d);
    w.spacing = b * std::exp(0.5 * e2 / d);
    if (d == 3) {
        const double B = scales.require_quantum_length();
        w.tunneling = std::exp(-(b / B) * std::exp(e2 / 6.0));
    } else {
        const double wavenumber = std::sqrt(2.0 * params.mass * std::abs(energy)) / params.hbar;
        w.tunneling = std::exp(-wavenumber * w.spacing);
    }
    w.well_frequency = well_frequency ? *well_frequency : well_frequency_at(energy, params);
    if (energy >= -0.9 * u0)
        w.warnings.push_back({"percolation_threshold",
                              "levels above -0.9 U0 belong to percolating regions, "
                              "not isolated wells"});
    else if (std::abs(energy) < 2.0 * u0)
        w.warnings.push_back({"tail_not_deep",
                              "|E| below 2 U0; Gaussian tail statistics are marginal"});
    return w;
}

double excited_state_probability(double energy, double u0, double well_frequency,
                                 double hbar) {
    if (!(energy < 0.0))
        throw NonNegativeEnergy("excited_state_probability: level energy must be negative");
    if (!(u0 > 0.0)) throw NonPositiveInput("excited_state_probability: U0 must be positive");
    if (!(well_frequency > 0.0))
        throw ZeroFrequency("excited_state_probability: well frequency must be positive");

    const double variance = u0 * u0;
    const double quantum = std::abs(energy) * hbar * well_frequency / variance;
    const double base = -(energy * energy + 3.0 * std::abs(energy) * hbar * well_frequency) /
                        (2.0 * variance);
    return std::exp(base) * std::pow(1.0 - std::exp(-quantum), -3.0);
}

FilledState filled_state_correlated(double density, const PhysicalParams& params,
                                    const Scales& scales) {
    params.validate();
    if (!(density > 0.0)) throw NonPositiveInput("filled_state_correlated: n must be positive");
    require_correlated_class(scales, "filled_state_correlated");
    const double nc = scales.require_critical_density();
    if (density >= nc)
        throw DensityAboveCritical("filled_state_correlated: n >= n_c, gas is delocalized");

    const int d = params.dimension;
    const double u0 = params.disorder.amplitude(d);
    const double b = params.disorder.corr_length;
    const double B = scales.require_quantum_length();
    const double u = std::log(nc / density);

    FilledState s;
    s.density = density;
    s.critical_density = nc;
    if (u <= 2.25)
        s.warnings.push_back({"mu_bracket",
                              "n above n_c exp(-9/4): the quantum correction to mu is "
                              "of order one and the expansion is unreliable"});
    s.level_energy = -u0 * std::sqrt(2.0 * u);
    s.radius = b / std::sqrt(u);
    s.spacing = b * std::pow(nc / density, 1.0 / d);
    s.tunneling = std::exp(-(b / B) * std::pow(nc / density, 1.0 / d));
    s.chemical_potential = s.level_energy * (1.0 - 2.25 / u);
    s.occupation = nc * std::pow(b, d);
    s.compressibility = density * std::sqrt(2.0 * u) / (u0 * (1.0 + 2.25 / u));
    s.momentum_spread = params.mass * well_frequency_at(s.level_energy, params) * s.radius;
    return s;
}

SuperfluidCorrections superfluid_corrections(double density, const PhysicalParams& params,
                                             const Scales& scales) {
    params.validate();
    if (!(density > 0.0)) throw NonPositiveInput("superfluid_corrections: n must be positive");
    if (params.dimension == 1)
        throw DivergentInOneDimension(
            "superfluid_corrections: the perturbative shift diverges at d = 1; "
            "see the Luttinger analysis instead");
    if (params.dimension != 3)
        throw InvalidDimension("superfluid_corrections: closed form available at d = 3 only");
    const double nc = scales.require_critical_density();
    if (density <= nc)
        throw BelowCritical("superfluid_corrections: n <= n_c, gas is not delocalized");

    SuperfluidCorrections c;
    c.energy_shift = std::sqrt(pi) / 3.0 * scales.larkin_energy * std::sqrt(density / nc);
    const double kappa = params.disorder.white_noise_equivalent(params.dimension);
    if (params.scattering_length) {
        c.energy_shift_amplitude = kappa * kappa * params.mass *
                                   std::sqrt(*params.scattering_length * density) /
                                   (2.0 * std::sqrt(pi) * params.hbar * params.hbar);
    }
    const double g = params.coupling();
    const double xi = params.hbar / std::sqrt(2.0 * params.mass * g * density);
    c.depletion_scale = xi / scales.larkin_length;
    if (density < std::exp(1.0) * nc)
        c.warnings.push_back({"near_transition",
                              "n within a factor e of n_c; the perturbative shift is "
                              "only marginally small"});
    return c;
}

VrhEstimate vrh(double temperature, double density, const PhysicalParams& params,
                const Scales& scales, double coefficient) {
    params.validate();
    if (!(temperature > 0.0))
        throw NonPositiveTemperature("vrh: temperature must be positive");
    if (!(density > 0.0)) throw NonPositiveInput("vrh: n must be positive");
    if (!(coefficient > 0.0)) throw NonPositiveInput("vrh: coefficient must be positive");
    const double nc = scales.require_critical_density();
    if (density >= nc)
        throw DensityAboveCritical("vrh: hopping transport requires the localized phase n < n_c");

    VrhEstimate v;
    v.hop_exponent = coefficient *
                     std::pow(scales.larkin_energy * nc / (temperature * density), 0.25);
    v.conductivity_factor = std::exp(-v.hop_exponent);
    if (v.hop_exponent < 1.0)
        v.warnings.push_back({"not_deeply_insulating",
                              "hop exponent below one; activated transport competes"});
    return v;
}

RelaxationEstimate relaxation_time(double gamma, const PhysicalParams& params,
                                   const Scales& scales) {
    params.validate();
    if (!(gamma > 1.0))
        throw GammaNotAboveOne("relaxation_time: needs Gamma > 1 (fragmented phase)");

    const double lng = std::log(gamma);
    RelaxationEstimate r;
    r.gamma = gamma;
    r.tunneling = std::exp(-std::pow(gamma, 1.0 / params.dimension));
    // Attempt frequency from the level spacing of an occupied well,
    // omega_n = (hbar / m L_d^2) ln^2 Gamma = (2 E_d / hbar) ln^2 Gamma.
    r.attempt_frequency = 2.0 * scales.larkin_energy / params.hbar * lng * lng;
    r.time = 2.0 * pi / (r.attempt_frequency * r.tunneling);
    if (lng < 1.0)
        r.warnings.push_back({"near_delocalization",
                              "ln Gamma below one: attempt frequency vanishes and tau "
                              "diverges at the transition"});
    return r;
}

} // namespace bosegas
