#include "bosegas/trap.hpp"

#include <cmath>

#include "bosegas/constants.hpp"

namespace bosegas {

std::string to_string(TrapRegime regime) {
    switch (regime) {
    case TrapRegime::Oscillator: return "WeakDisorder_SingleCloud_Oscillator";
    case TrapRegime::ThomasFermi: return "WeakDisorder_ThomasFermi";
    case TrapRegime::NonErgodic: return "StrongDisorder_NonErgodic";
    case TrapRegime::FragmentedLocalized: return "StrongDisorder_FragmentedLocalized";
    case TrapRegime::Superfluid: return "Superfluid";
    }
    return "unknown";
}

namespace {

// Interaction strength in the units of the classification inequalities:
// s = N a / ell_perp^{3-d}, evaluated without ever needing ell_perp thanks to
// the exact relations a_1 = ell_perp^2 / a and g_2 = g / (2 ell_perp).
double interaction_scale(const PhysicalParams& p) {
    if (!p.particle_count)
        throw MissingParameter("trap_regime: particle_count is required");
    const double N = *p.particle_count;
    switch (p.dimension) {
    case 3: {
        const double a = p.scattering_length
                             ? *p.scattering_length
                             : p.mass * p.coupling() / (4.0 * pi * p.hbar * p.hbar);
        return N * a;
    }
    case 1: {
        const double a1 = p.scattering_length
                              ? *p.scattering_length
                              : 2.0 * p.hbar * p.hbar / (p.mass * p.coupling());
        return N / a1;
    }
    case 2:
        return N * p.mass * p.coupling() / (2.0 * pi * p.hbar * p.hbar);
    }
    throw InvalidDimension("trap_regime: dimension must be 1, 2 or 3");
}

double thomas_fermi_radius(const PhysicalParams& p, double s, double ell) {
    const int d = p.dimension;
    if (d == 3) return std::pow(4.5 * s * std::pow(ell, 4), 0.2);
    const double c = 4.0 * pi * d / (unit_ball_volume(d) * unit_ball_volume(3 - d));
    return std::pow(c * s * std::pow(ell, 4), 1.0 / (d + 2.0));
}

} // namespace

RegimeReport trap_regime(const PhysicalParams& params, const Scales& scales) {
    params.validate();
    const int d = params.dimension;
    const double ell = scales.require_oscillator_length();
    const double s = interaction_scale(params);
    const bool smooth = scales.disorder_class == DisorderClass::StronglyCorrelated;

    // Collective pinning length: Larkin length for short-range disorder,
    // quantum length B for smooth disorder.
    const double pin = smooth ? scales.require_quantum_length() : scales.larkin_length;
    const double b = params.disorder.corr_length;

    // Interaction thresholds for s. At d = 3 the inequalities read
    // 3Na <> ell (trap) and 3Na <> L or b^3/B^2 (disorder); in reduced
    // dimension they read s <> ell^{d-2} and s <> L_d^{d-2} or b^d/B^2.
    double weak_threshold, strong_threshold;
    if (d == 3) {
        weak_threshold = ell / 3.0;
        strong_threshold = smooth ? b * b * b / (3.0 * pin * pin) : pin / 3.0;
    } else {
        weak_threshold = std::pow(ell, d - 2);
        strong_threshold = smooth ? std::pow(b, d) / (pin * pin) : std::pow(pin, d - 2);
    }

    RegimeReport rep;
    const double disorder_margin = std::log(ell / pin); // > 0: strong disorder
    rep.boundary_margins.emplace_back("strong_disorder", disorder_margin);

    if (disorder_margin <= 0.0) {
        const double margin = std::log(s / weak_threshold);
        rep.boundary_margins.emplace_back("interaction_vs_trap", margin);
        if (margin < 0.0) {
            rep.regime = TrapRegime::Oscillator;
            rep.cloud_size = ell;
        } else {
            rep.regime = TrapRegime::ThomasFermi;
            rep.cloud_size = thomas_fermi_radius(params, s, ell);
        }
        rep.label = to_string(rep.regime);
        return rep;
    }

    const double weak_int_margin = std::log(s / strong_threshold);
    rep.boundary_margins.emplace_back("interaction_vs_disorder", weak_int_margin);

    if (weak_int_margin < 0.0) {
        rep.regime = TrapRegime::NonErgodic;
        if (smooth) {
            rep.cloud_size = b;
            if (d == 3) {
                const double arg = ell * ell / (b * pin);
                if (arg > 1.0) {
                    const double dist = (ell * ell / pin) * std::pow(std::log(arg), 0.25);
                    rep.deepest_well_distance = dist;
                    if (dist > b) {
                        const double u0 = params.disorder.amplitude(d);
                        rep.well_depth = -u0 * std::sqrt(6.0 * std::log(dist / b));
                    }
                } else {
                    rep.warnings.push_back({"marginal_geometry",
                                            "ell^2 <= b B: the deepest accessible well sits "
                                            "inside the oscillator cloud"});
                }
            }
        } else {
            const double lg = std::log(ell / pin);
            if (d == 3) {
                rep.cloud_size = pin / (6.0 * lg);
                rep.deepest_well_distance = 6.0 * std::sqrt(2.0) * (ell * ell / pin) * lg;
            } else {
                rep.cloud_size = pin / std::pow(lg, 1.0 / (4.0 - d));
            }
        }
        rep.label = to_string(rep.regime);
        return rep;
    }

    // Moderate interaction: the localization parameter decides.
    double gamma;
    if (smooth) {
        // Gamma = ell^{2d} ell_perp^{3-d} / (B^{d+2} a N) = ell^{2d} / (B^{d+2} s)
        gamma = std::pow(ell, 2 * d) / (std::pow(pin, d + 2) * s);
    } else if (d == 3) {
        gamma = std::pow(ell, 6) / (3.0 * s * std::pow(pin, 5));
    } else if (d == 1) {
        // ell^2 a_1 / (N L^3) with s = N / a_1
        gamma = ell * ell / (s * std::pow(pin, 3));
    } else {
        gamma = std::pow(ell, 4) / (*params.particle_count * std::pow(pin, 4));
    }
    rep.gamma = gamma;
    rep.boundary_margins.emplace_back("log_gamma", std::log(gamma));

    if (gamma > 1.0) {
        rep.regime = TrapRegime::FragmentedLocalized;
        const double lg = std::log(gamma);
        if (smooth) {
            rep.cloud_size = std::pow(2.0, 0.75) * (ell * ell / pin) * std::pow(lg, 0.25);
            rep.fragment_size = (d == 3) ? std::pow(s * b * b * pin * pin, 0.2)
                                         : b / std::sqrt(lg);
            rep.fragment_spacing = b * std::pow(gamma, 1.0 / d);
        } else {
            rep.cloud_size = (ell * ell / pin) * std::pow(lg, 1.0 / (4.0 - d));
            rep.fragment_size = pin / std::pow(lg, 1.0 / (4.0 - d));
            rep.fragment_spacing = *rep.fragment_size * std::pow(gamma, 1.0 / d);
        }
        if (lg < 1.0)
            rep.warnings.push_back({"near_delocalization",
                                    "Gamma barely above one; fragment scales are marginal"});
    } else {
        rep.regime = TrapRegime::Superfluid;
        rep.cloud_size = thomas_fermi_radius(params, s, ell);
    }
    rep.label = to_string(rep.regime);
    return rep;
}

} // namespace bosegas
