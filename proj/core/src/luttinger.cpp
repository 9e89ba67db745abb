#include "bosegas/luttinger.hpp"

#include <cmath>

#include "bosegas/constants.hpp"
#include "bosegas/errors.hpp"

namespace bosegas {

namespace {

// Bridge endpoints: values and d K / d ln(gamma) of the two asymptotic
// branches at gamma = 0.1 and gamma = 10. The secant slope is 0.150351...,
// and both endpoint slopes sit inside (0, 3x secant), so the Hermite cubic
// is monotone (Fritsch-Carlson).
constexpr double kGammaLo = 0.1;
constexpr double kGammaHi = 10.0;
constexpr double kValueLo = 0.26622776601683793;
constexpr double kValueHi = 0.95861517465880425;
constexpr double kSlopeLo = 0.10811388300841897;
constexpr double kSlopeHi = 0.042278147194321468;

double bridge(double gamma) {
    const double x0 = std::log(kGammaLo);
    const double x1 = std::log(kGammaHi);
    const double w = x1 - x0;
    const double t = (std::log(gamma) - x0) / w;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * kValueLo + h10 * w * kSlopeLo + h01 * kValueHi + h11 * w * kSlopeHi;
}

} // namespace

double luttinger_parameter(double gamma) {
    if (!(gamma > 0.0)) throw NonPositiveInput("luttinger_parameter: gamma must be > 0");
    if (gamma <= kGammaLo) {
        const double r = std::sqrt(gamma);
        return r * (1.0 - 0.5 * r);
    }
    if (gamma >= kGammaHi) return std::sqrt(1.0 - 8.0 / (pi * pi * gamma));
    return bridge(gamma);
}

LuttingerReport luttinger_analysis(const PhysicalParams& params, const Scales& scales,
                                   std::optional<double> system_size) {
    if (params.dimension != 1)
        throw OutsideOneDimension("luttinger_analysis: defined for dimension 1 only");
    if (!params.mean_density)
        throw MissingParameter("luttinger_analysis: mean_density required");
    if (!params.scattering_length)
        throw MissingParameter("luttinger_analysis: scattering_length required");

    const double n = *params.mean_density;
    const double a = *params.scattering_length;
    LuttingerReport rep;
    rep.gamma = 1.0 / (pi * pi * n * a);
    rep.K = luttinger_parameter(rep.gamma);
    rep.K_disorder = 1.0 / (pi * n * scales.larkin_length);
    if (system_size) {
        if (!(*system_size > 0.0))
            throw NonPositiveInput("luttinger_analysis: system_size must be > 0");
        rep.K_system = 1.0 / (pi * n * *system_size);
    }

    // Three sectors of the bare disorder strength under the harmonic-fluid RG.
    const double kappa = params.disorder.white_noise_equivalent(1);
    if (rep.K <= rep.K_disorder) {
        rep.sector = "pinned";
        rep.kappa_eff = kappa;
    } else if (rep.K < 2.0 / 3.0) {
        rep.sector = "irrelevant";
        rep.kappa_eff = 0.0;
        rep.warnings.push_back({"disorder_irrelevant",
                                "K below 2/3: weak disorder scales to zero"});
    } else {
        rep.sector = "renormalized";
        rep.kappa_eff = kappa * std::pow(rep.K_disorder / rep.K, 1.0 / (rep.K - 2.0 / 3.0));
    }

    if (scales.healing_length) {
        const double ratio = scales.larkin_length / *scales.healing_length;
        if (ratio > 1.0) {
            rep.phase_variance = std::log(ratio) / rep.K;
        } else {
            rep.warnings.push_back({"no_pinning_window",
                                    "Larkin length below healing length; phase variance undefined"});
        }
    }
    return rep;
}

} // namespace bosegas
