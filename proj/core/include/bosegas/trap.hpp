#ifndef BOSEGAS_TRAP_HPP
#define BOSEGAS_TRAP_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bosegas/scales.hpp"

namespace bosegas {

enum class TrapRegime {
    Oscillator,          // weak disorder, weak interaction: single cloud of size ell
    ThomasFermi,         // weak disorder, strong interaction
    NonErgodic,          // strong disorder, weak interaction: one deep well far out
    FragmentedLocalized, // strong disorder, moderate interaction, Gamma > 1
    Superfluid,          // interaction smooths the disorder out, Gamma < 1
};

std::string to_string(TrapRegime regime);

struct RegimeReport {
    TrapRegime regime = TrapRegime::Oscillator;
    std::string label;
    std::optional<double> gamma;       // localization parameter, strong-disorder branches
    double cloud_size = 0.0;           // overall extent of the occupied region
    std::optional<double> fragment_size;
    std::optional<double> fragment_spacing;
    std::optional<double> deepest_well_distance; // non-ergodic regime
    std::optional<double> well_depth;            // non-ergodic regime, smooth disorder
    // Signed log-ratios of the quantities whose comparison decided each branch;
    // near-zero entries flag a classification that could flip.
    std::vector<std::pair<std::string, double>> boundary_margins;
    Warnings warnings;
};

// Classify the state of N trapped interacting bosons in the disorder described
// by params/scales. Requires trap_frequency and particle_count plus a resolvable
// interaction strength.
RegimeReport trap_regime(const PhysicalParams& params, const Scales& scales);

} // namespace bosegas

#endif
