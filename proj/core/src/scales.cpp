#include "bosegas/scales.hpp"

#include <cmath>
#include <limits>

#include "bosegas/constants.hpp"

namespace bosegas {

std::string to_string(DisorderKind kind) {
    switch (kind) {
    case DisorderKind::Uncorrelated: return "uncorrelated";
    case DisorderKind::OrnsteinZernike: return "ornstein_zernike";
    case DisorderKind::GaussianCorrelated: return "gaussian";
    case DisorderKind::LorentzCorrelated: return "lorentz";
    }
    return "unknown";
}

std::string to_string(DisorderClass cls) {
    switch (cls) {
    case DisorderClass::Uncorrelated: return "uncorrelated";
    case DisorderClass::WeaklyCorrelated: return "weakly_correlated";
    case DisorderClass::StronglyCorrelated: return "strongly_correlated";
    }
    return "unknown";
}

DisorderSpec DisorderSpec::uncorrelated(double kappa) {
    DisorderSpec spec;
    spec.kind = DisorderKind::Uncorrelated;
    spec.kappa = kappa;
    return spec;
}

DisorderSpec DisorderSpec::ornstein_zernike(double kappa, double b) {
    DisorderSpec spec;
    spec.kind = DisorderKind::OrnsteinZernike;
    spec.kappa = kappa;
    spec.corr_length = b;
    return spec;
}

DisorderSpec DisorderSpec::gaussian(double u0, double b) {
    DisorderSpec spec;
    spec.kind = DisorderKind::GaussianCorrelated;
    spec.strength = u0;
    spec.corr_length = b;
    return spec;
}

DisorderSpec DisorderSpec::lorentz(double u0, double b) {
    DisorderSpec spec;
    spec.kind = DisorderKind::LorentzCorrelated;
    spec.strength = u0;
    spec.corr_length = b;
    return spec;
}

void DisorderSpec::validate(int dimension) const {
    if (dimension < 1 || dimension > 3)
        throw InvalidDimension("DisorderSpec: dimension must be 1, 2 or 3");
    switch (kind) {
    case DisorderKind::Uncorrelated:
        if (!(kappa > 0.0)) throw NonPositiveInput("DisorderSpec: kappa must be positive");
        break;
    case DisorderKind::OrnsteinZernike:
        if (!(kappa > 0.0)) throw NonPositiveInput("DisorderSpec: kappa must be positive");
        if (!(corr_length > 0.0)) throw NonPositiveInput("DisorderSpec: b must be positive");
        break;
    case DisorderKind::GaussianCorrelated:
    case DisorderKind::LorentzCorrelated:
        if (!(strength > 0.0)) throw NonPositiveInput("DisorderSpec: U0 must be positive");
        if (!(corr_length > 0.0)) throw NonPositiveInput("DisorderSpec: b must be positive");
        break;
    }
}

double DisorderSpec::amplitude(int dimension) const {
    switch (kind) {
    case DisorderKind::Uncorrelated:
        throw WrongDisorderClass("DisorderSpec: uncorrelated noise has no finite amplitude");
    case DisorderKind::OrnsteinZernike:
        return kappa * std::pow(corr_length, -0.5 * dimension);
    case DisorderKind::GaussianCorrelated:
    case DisorderKind::LorentzCorrelated:
        return strength;
    }
    throw ValidationError("DisorderSpec: unknown kind");
}

double DisorderSpec::white_noise_equivalent(int dimension) const {
    switch (kind) {
    case DisorderKind::Uncorrelated:
    case DisorderKind::OrnsteinZernike:
        return kappa;
    case DisorderKind::GaussianCorrelated:
    case DisorderKind::LorentzCorrelated:
        return std::sqrt(unit_ball_volume(dimension)) * strength *
               std::pow(corr_length, 0.5 * dimension);
    }
    throw ValidationError("DisorderSpec: unknown kind");
}

void PhysicalParams::validate() const {
    if (!(hbar > 0.0)) throw NonPositiveInput("PhysicalParams: hbar must be positive");
    if (!(mass > 0.0)) throw NonPositiveInput("PhysicalParams: mass must be positive");
    if (dimension < 1 || dimension > 3)
        throw InvalidDimension("PhysicalParams: dimension must be 1, 2 or 3");
    disorder.validate(dimension);
    if (scattering_length && !(*scattering_length > 0.0))
        throw NonPositiveInput("PhysicalParams: scattering length must be positive");
    if (coupling_g && !(*coupling_g > 0.0))
        throw NonPositiveInput("PhysicalParams: coupling must be positive");
    if (mean_density && !(*mean_density > 0.0))
        throw NonPositiveInput("PhysicalParams: density must be positive");
    if (particle_count && !(*particle_count > 0.0))
        throw NonPositiveInput("PhysicalParams: particle count must be positive");
    if (trap_frequency && !(*trap_frequency > 0.0))
        throw NonPositiveInput("PhysicalParams: trap frequency must be positive");
    if (transverse_frequency && !(*transverse_frequency > 0.0))
        throw NonPositiveInput("PhysicalParams: transverse frequency must be positive");
    if (mean_density && particle_count)
        throw ValidationError("PhysicalParams: give either mean_density or particle_count, not both");
}

bool PhysicalParams::has_coupling() const {
    if (coupling_g) return true;
    return scattering_length && dimension != 2;
}

double PhysicalParams::coupling() const {
    if (coupling_g) return *coupling_g;
    if (!scattering_length)
        throw MissingParameter("PhysicalParams: coupling requires scattering_length or coupling_g");
    const double a = *scattering_length;
    switch (dimension) {
    case 3:
        return 4.0 * pi * hbar * hbar * a / mass;
    case 1:
        // Quasi-1d contact coupling g_1 = Omega_1 hbar^2 / (m a_1); kept exact so
        // that reduced_dimension_map outputs satisfy it identically.
        return 2.0 * hbar * hbar / (mass * a);
    case 2:
        throw MissingParameter("PhysicalParams: at d = 2 the coupling must be given explicitly");
    default:
        throw InvalidDimension("PhysicalParams: dimension must be 1, 2 or 3");
    }
}

double Scales::require_critical_density() const {
    if (!critical_density)
        throw MissingParameter("Scales: critical density needs an interaction strength");
    return *critical_density;
}

double Scales::require_healing_length() const {
    if (!healing_length)
        throw MissingParameter("Scales: healing length needs mean_density and coupling");
    return *healing_length;
}

double Scales::require_oscillator_length() const {
    if (!oscillator_length)
        throw MissingTrap("Scales: oscillator length needs trap_frequency");
    return *oscillator_length;
}

double Scales::require_quantum_length() const {
    if (!quantum_length)
        throw WrongDisorderClass("Scales: quantum length is defined for correlated disorder only");
    return *quantum_length;
}

Scales derive_scales(const PhysicalParams& params) {
    params.validate();
    const int d = params.dimension;
    const double hbar = params.hbar;
    const double m = params.mass;

    Scales s;
    s.dimension = d;

    const double kappa = params.disorder.white_noise_equivalent(d);
    s.larkin_length = std::pow(hbar * hbar * hbar * hbar / (m * m * kappa * kappa),
                               1.0 / (4.0 - d));
    s.larkin_energy = hbar * hbar / (2.0 * m * s.larkin_length * s.larkin_length);

    if (params.disorder.correlated()) {
        const double u0 = params.disorder.amplitude(d);
        const double prefactor = (d == 3) ? std::pow(3.0 / (4.0 * pi), 0.25) : 1.0;
        s.quantum_length = prefactor * hbar / std::sqrt(m * u0);

        const double b = params.disorder.corr_length;
        s.disorder_class = (b > s.larkin_length) ? DisorderClass::StronglyCorrelated
                                                 : DisorderClass::WeaklyCorrelated;
        const double margin = std::log(b / s.larkin_length);
        if (std::abs(margin) < 0.1)
            s.warnings.push_back({"disorder_class_boundary",
                                  "correlation length within 10% of the Larkin length; "
                                  "both formula sets are marginal here"});
    } else {
        s.disorder_class = DisorderClass::Uncorrelated;
    }

    if (params.has_coupling()) {
        const double g = params.coupling();
        if (s.disorder_class == DisorderClass::StronglyCorrelated) {
            const double u0 = params.disorder.amplitude(d);
            if (d == 3) {
                s.critical_density = std::sqrt(3.0) * pi * u0 / g;
            } else {
                s.critical_density = unit_ball_volume(d) / d * u0 / g;
            }
        } else {
            // n_c = Omega_d hbar^2 / ((4-d) m L_d^2 g_d); reduces to 1/(3 L^2 a)
            // at d = 3 with the standard contact coupling.
            s.critical_density = unit_ball_volume(d) * hbar * hbar /
                                 ((4.0 - d) * m * s.larkin_length * s.larkin_length * g);
        }
        if (params.mean_density) {
            s.healing_length = hbar / std::sqrt(2.0 * m * g * *params.mean_density);
        }
    }

    if (params.trap_frequency)
        s.oscillator_length = std::sqrt(hbar / (m * *params.trap_frequency));
    if (params.transverse_frequency)
        s.transverse_length = std::sqrt(hbar / (m * *params.transverse_frequency));

    return s;
}

ReducedParams reduced_dimension_map(const PhysicalParams& params3d, const Scales& scales3d,
                                    int target_d) {
    params3d.validate();
    if (params3d.dimension != 3)
        throw InvalidDimension("reduced_dimension_map: input parameters must be 3d");
    if (target_d < 1 || target_d > 3)
        throw InvalidDimension("reduced_dimension_map: target dimension must be 1, 2 or 3");

    if (target_d == 3) {
        // Degenerate target: nothing is integrated out and the map collapses
        // to the identity (L_3 = L, g_3 = g). No validity window applies.
        ReducedParams out;
        out.params = params3d;
        out.scales = derive_scales(out.params);
        out.validity_ok = true;
        return out;
    }
    if (!scales3d.transverse_length)
        throw MissingParameter("reduced_dimension_map: needs transverse_frequency");

    const double hbar = params3d.hbar;
    const double m = params3d.mass;
    const double lp = *scales3d.transverse_length;
    const int codim = 3 - target_d;

    ReducedParams out;
    out.params = params3d;
    out.params.dimension = target_d;

    // kappa_d^2 = kappa^2 / ell_perp^{3-d} preserves L_d = (L ell_perp^{3-d})^{1/(4-d)}.
    switch (params3d.disorder.kind) {
    case DisorderKind::Uncorrelated:
    case DisorderKind::OrnsteinZernike:
        out.params.disorder.kappa = params3d.disorder.kappa * std::pow(lp, -0.5 * codim);
        break;
    case DisorderKind::GaussianCorrelated:
    case DisorderKind::LorentzCorrelated:
        // Amplitude and range survive the transverse average while b >> ell_perp.
        break;
    }

    if (target_d == 1) {
        if (!params3d.scattering_length)
            throw MissingParameter("reduced_dimension_map: a_1 = ell_perp^2 / a needs a");
        const double a1 = lp * lp / *params3d.scattering_length;
        out.params.scattering_length = a1;
        out.params.coupling_g = 2.0 * hbar * hbar / (m * a1);
    } else {
        const double g3 = params3d.coupling();
        out.params.scattering_length.reset();
        out.params.coupling_g = g3 / (unit_ball_volume(codim) * std::pow(lp, codim));
    }

    if (params3d.mean_density)
        out.params.mean_density =
            *params3d.mean_density * unit_ball_volume(codim) * std::pow(lp, codim);

    if (params3d.scattering_length) {
        out.margin_low = std::log(lp / *params3d.scattering_length);
    } else {
        out.margin_low = std::numeric_limits<double>::quiet_NaN();
    }
    out.margin_high = std::log(scales3d.larkin_length / lp);
    out.validity_ok = out.margin_low > 0.0 && out.margin_high > 0.0;

    out.scales = derive_scales(out.params);
    return out;
}

} // namespace bosegas
