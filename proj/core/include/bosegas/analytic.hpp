#ifndef BOSEGAS_ANALYTIC_HPP
#define BOSEGAS_ANALYTIC_HPP

#include <optional>

#include "bosegas/scales.hpp"

namespace bosegas {

// Probability prefactor f entering the deep-well census. The asymptotic laws
// fix only the exponent; f is an order-one convention that callers may pin.
//   Unity:  f = 1 (default; every closed-form example assumes it)
//   Cardy:  f = x^alpha with x the logarithm in the exponent,
//           alpha = 1 at d = 2, 3 and alpha = 0 at d = 1
//   Custom: f = x^alpha with caller-chosen alpha
struct Prefactor {
    enum class Mode { Unity, Cardy, Custom };
    Mode mode = Mode::Unity;
    double alpha = 0.0;

    static Prefactor unity() { return {}; }
    static Prefactor cardy() { return {Mode::Cardy, 0.0}; }
    static Prefactor custom(double alpha) { return {Mode::Custom, alpha}; }

    double value(double x, int dimension) const;
};

// Census of potential wells able to bind a level, at fixed well size or depth.
struct WellStats {
    double energy_level = 0.0;    // E < 0
    double radius = 0.0;          // R (well size; b for smooth disorder)
    double probability = 0.0;     // q, per coarse-grained cell
    double well_density = 0.0;    // n_w = q / R^d
    double spacing = 0.0;         // typical distance between such wells
    double tunneling = 0.0;       // t, amplitude between neighbouring wells
    double prefactor_f = 1.0;
    std::optional<double> well_frequency; // omega_w, smooth disorder only
    Warnings warnings;
};

// State of the gas once n bosons per unit volume fill the deepest wells.
struct FilledState {
    double density = 0.0;             // n
    double critical_density = 0.0;    // n_c
    double radius = 0.0;              // R(n), size of occupied wells
    double level_energy = 0.0;        // single-particle level being filled
    double chemical_potential = 0.0;  // mu(n) < 0
    double spacing = 0.0;             // distance between occupied wells
    double tunneling = 0.0;           // t(n)
    double occupation = 0.0;          // bosons per occupied well
    double compressibility = 0.0;     // dn/dmu
    std::optional<double> momentum_spread; // Delta p, smooth disorder only
    Warnings warnings;
};

// Wells of size R in white-noise disorder: q = f exp(-(L_d/R)^{4-d}).
WellStats well_statistics_uncorrelated(double radius, const PhysicalParams& params,
                                       const Scales& scales,
                                       Prefactor f = Prefactor::unity());

// Occupied-well picture at density n: R = L_d / ln^{1/(4-d)}(n_c/n),
// mu = -E_d ln^{2/(4-d)}(n_c/n), spacing = R (n_c/(f n))^{1/d},
// t = exp(-spacing/R). Requires n < n_c/e for the logarithms to be deep.
FilledState filled_state_uncorrelated(double density, const PhysicalParams& params,
                                      const Scales& scales,
                                      Prefactor f = Prefactor::unity());

// Wells of depth |E| in smooth disorder of amplitude U0 and range b:
// q = exp(-E^2 / 2 U0^2), spacing = b exp(E^2 / (2 d U0^2)).
WellStats well_statistics_correlated(double energy, const PhysicalParams& params,
                                     const Scales& scales,
                                     std::optional<double> well_frequency = std::nullopt);

// Probability of hosting a level at E including excited states of deeper
// wells: q = exp(-(E^2 + 3|E| hbar w)/(2 U0^2)) (1 - exp(-|E| hbar w / U0^2))^{-3}.
double excited_state_probability(double energy, double u0, double well_frequency,
                                 double hbar);

// Filling of smooth-disorder wells at density n: E(n) = -U0 sqrt(2 ln(n_c/n)),
// mu = E(n) (1 - (9/4)/ln(n_c/n)), spacing = b (n_c/n)^{1/d},
// t = exp(-(b/B)(n_c/n)^{1/d}).
FilledState filled_state_correlated(double density, const PhysicalParams& params,
                                    const Scales& scales);

// Beyond-mean-field energy shift per particle above the delocalization
// density, d = 3 only: the disorder analogue of the depletion correction.
struct SuperfluidCorrections {
    double energy_shift = 0.0;          // (sqrt(pi)/3) E_d sqrt(n/n_c)
    double energy_shift_amplitude = 0.0; // kappa^2 sqrt(m a n) / (2 sqrt(pi) hbar^2)
    double depletion_scale = 0.0;       // xi / L, smallness parameter
    Warnings warnings;
};

SuperfluidCorrections superfluid_corrections(double density, const PhysicalParams& params,
                                             const Scales& scales);

// Variable-range-hopping suppression of the low-temperature conductivity:
// sigma ~ exp(-C (E_d n_c / (T n))^{1/4}).
struct VrhEstimate {
    double hop_exponent = 0.0;
    double conductivity_factor = 0.0;
    Warnings warnings;
};

VrhEstimate vrh(double temperature, double density, const PhysicalParams& params,
                const Scales& scales, double coefficient = 1.0);

// Time for a fragmented cloud to reach equilibrium across barriers:
// tau = 2 pi / (omega_n t) with omega_n = (2 E_d / hbar) ln^2(Gamma) and
// t = exp(-Gamma^{1/d}).
struct RelaxationEstimate {
    double gamma = 0.0;
    double tunneling = 0.0;
    double attempt_frequency = 0.0; // omega_n
    double time = 0.0;              // tau
    Warnings warnings;
};

RelaxationEstimate relaxation_time(double gamma, const PhysicalParams& params,
                                   const Scales& scales);

} // namespace bosegas

#endif
