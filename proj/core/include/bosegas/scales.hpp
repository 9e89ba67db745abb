#ifndef BOSEGAS_SCALES_HPP
#define BOSEGAS_SCALES_HPP

#include <optional>
#include <string>

#include "bosegas/errors.hpp"

namespace bosegas {

// Shape of the disorder two-point function K(r) = <U(x)U(x+r)>.
enum class DisorderKind {
    Uncorrelated,       // K(r) = kappa^2 delta(r)
    OrnsteinZernike,    // spectrum kappa^2 / (1 + b^2 q^2)
    GaussianCorrelated, // K(r) = U0^2 exp(-r^2 / 2b^2)
    LorentzCorrelated,  // K(r) = U0^2 b^2 / (r^2 + b^2)
};

std::string to_string(DisorderKind kind);

struct DisorderSpec {
    DisorderKind kind = DisorderKind::Uncorrelated;
    double kappa = 0.0;       // energy * length^{d/2}; Uncorrelated and OrnsteinZernike
    double strength = 0.0;    // U0 = sqrt(<U^2>), energy; Gaussian and Lorentz
    double corr_length = 0.0; // b, length; zero only for Uncorrelated

    static DisorderSpec uncorrelated(double kappa);
    static DisorderSpec ornstein_zernike(double kappa, double b);
    static DisorderSpec gaussian(double u0, double b);
    static DisorderSpec lorentz(double u0, double b);

    bool correlated() const { return kind != DisorderKind::Uncorrelated; }

    // Typical amplitude U0 of the potential seen by a well of size b.
    // For Ornstein-Zernike fields the site variance diverges; the effective
    // amplitude kappa b^{-d/2} is what the deep-tail statistics respond to.
    double amplitude(int dimension) const;

    // White-noise strength with the same Larkin length. For smooth correlated
    // fields this is sqrt(Omega_d) U0 b^{d/2}, which reproduces the exact
    // d = 3 relation L = 3 hbar^4 / (4 pi m^2 U0^2 b^3).
    double white_noise_equivalent(int dimension) const;

    void validate(int dimension) const;
};

// Input parameters in any consistent unit system; hbar and mass enter every
// formula explicitly.
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    int dimension = 3;
    DisorderSpec disorder;

    // Interaction: scattering length a_d and/or coupling g_d. When only a_d is
    // given the coupling is resolved as g_d = 4 pi hbar^2 a_d^{d-2} / m, the
    // standard contact coupling at d = 3. At d = 2 the exponent vanishes, so
    // the coupling must be supplied directly.
    std::optional<double> scattering_length;
    std::optional<double> coupling_g;

    std::optional<double> mean_density;         // n, homogeneous runs
    std::optional<double> particle_count;       // N, trapped runs
    std::optional<double> trap_frequency;       // omega
    std::optional<double> transverse_frequency; // omega_perp, quasi-low-d setups

    void validate() const;

    // Resolved coupling g_d; throws MissingParameter when underdetermined.
    double coupling() const;
    bool has_coupling() const;
};

enum class DisorderClass { Uncorrelated, WeaklyCorrelated, StronglyCorrelated };

std::string to_string(DisorderClass cls);

// Derived collective scales. Optional members are only populated when the
// inputs that define them are present.
struct Scales {
    int dimension = 3;
    DisorderClass disorder_class = DisorderClass::Uncorrelated;

    double larkin_length = 0.0; // L_d = (hbar^4 / m^2 kappa^2)^{1/(4-d)}
    double larkin_energy = 0.0; // E_d = hbar^2 / (2 m L_d^2)

    std::optional<double> quantum_length;    // B; correlated variants
    std::optional<double> critical_density;  // n_c; needs coupling
    std::optional<double> healing_length;    // xi = hbar / sqrt(2 m g n); needs n
    std::optional<double> oscillator_length; // ell = sqrt(hbar / m omega)
    std::optional<double> transverse_length; // ell_perp from omega_perp

    Warnings warnings;

    double require_critical_density() const;
    double require_healing_length() const;
    double require_oscillator_length() const;
    double require_quantum_length() const;
};

Scales derive_scales(const PhysicalParams& params);

// Effective one- or two-dimensional description of a gas confined by a tight
// transverse trap: L_d = (L ell_perp^{3-d})^{1/(4-d)}, a_1 = ell_perp^2 / a,
// g_d chosen so that g_1 = 2 hbar^2 / (m a_1) holds identically. target_d = 3
// is accepted and is the identity map.
struct ReducedParams {
    PhysicalParams params;
    Scales scales;
    bool validity_ok = false;      // requires a << ell_perp << L
    double margin_low = 0.0;       // log(ell_perp / a)
    double margin_high = 0.0;      // log(L / ell_perp)
};

ReducedParams reduced_dimension_map(const PhysicalParams& params3d, const Scales& scales3d,
                                    int target_d);

} // namespace bosegas

#endif
