#ifndef BOSEGAS_LUTTINGER_HPP
#define BOSEGAS_LUTTINGER_HPP

#include <optional>
#include <string>

#include "bosegas/scales.hpp"

namespace bosegas {

// Hydrodynamic analysis of the d = 1 gas. K is the stiffness-like parameter
// that grows from 0 (ideal gas) to 1 (fermionized limit) as the Lieb-Liniger
// coupling gamma = 1/(pi^2 n a) increases; disorder is a relevant perturbation
// for K > 2/3.
struct LuttingerReport {
    double gamma = 0.0;
    double K = 0.0;
    double K_disorder = 0.0;               // K_kappa = 1 / (pi n L_1)
    std::optional<double> K_system;        // 1 / (pi n L_sys) when a size is given
    double kappa_eff = 0.0;                // renormalized disorder strength
    std::optional<double> phase_variance;  // 2<phi^2> = (1/K) ln(L_1 / xi_1)
    std::string sector;                    // "pinned" | "renormalized" | "irrelevant"
    Warnings warnings;
};

// Luttinger parameter on the interpolated Lieb-Liniger curve. Exact asymptotic
// branches below gamma = 0.1 and above gamma = 10; a monotone cubic Hermite
// bridge in ln(gamma) in between.
double luttinger_parameter(double gamma);

LuttingerReport luttinger_analysis(const PhysicalParams& params, const Scales& scales,
                                   std::optional<double> system_size = std::nullopt);

} // namespace bosegas

#endif
