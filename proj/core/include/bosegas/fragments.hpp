#ifndef BOSEGAS_FRAGMENTS_HPP
#define BOSEGAS_FRAGMENTS_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

// Which cells count as occupied when carving a density field into fragments.
struct ThresholdPolicy {
    enum class Kind { Relative, Absolute, MuLevel };
    Kind kind = Kind::Relative;
    double value = 0.05;

    // Occupied above a fraction of the peak density.
    static ThresholdPolicy relative(double epsilon) { return {Kind::Relative, epsilon}; }
    // Occupied above a fixed density.
    static ThresholdPolicy absolute(double level) { return {Kind::Absolute, level}; }
    // Occupied where the external potential lies below mu (the support of
    // the interaction-dominated profile); needs the potential field.
    static ThresholdPolicy mu_level(double mu) { return {Kind::MuLevel, mu}; }
};

struct Fragment {
    int id = 0;                                    // index in the sorted report
    std::size_t cells = 0;
    double particle_count = 0.0;                   // integral of density
    std::array<double, 3> centroid = {0.0, 0.0, 0.0};
    double rms_radius = 0.0;
    double peak_density = 0.0;
    std::size_t peak_site = 0;
    bool wraps = false;                            // closes on itself around a periodic axis
};

// Semiclassical link between a fragment and its nearest neighbor.
struct PairTunneling {
    int from = 0;
    int to = 0;
    double amplitude = 0.0;
};

struct FragmentReport {
    std::vector<Fragment> fragments;               // heaviest first
    double threshold = 0.0;                        // density cut actually applied
    double occupied_fraction = 0.0;
    double mass_inside = 0.0;                      // sum of fragment particle counts
    double mass_total = 0.0;
    double captured_fraction = 0.0;                // mass_inside / mass_total
    bool percolates = false;                       // some fragment wraps the box
    double median_radius = 0.0;
    double median_spacing = 0.0;                   // nearest-neighbor centroid distance
    double mean_spacing = 0.0;
    std::vector<PairTunneling> tunneling;          // filled by attach_tunneling
    Warnings warnings;
};

// Connected components of the occupied mask (face adjacency, periodic wrap
// when the grid is periodic). An empty report is a valid result.
FragmentReport detect_fragments(const Field& density, const ThresholdPolicy& policy,
                                const Field* potential = nullptr);

// Barrier transparency along the straight minimum-image segment between two
// positions: exp(-(1/hbar) integral sqrt(2m max(0, U - mu)) dl), multilinear
// interpolation, trapezoid rule at step h/2 unless overridden.
double wkb_tunneling(const Field& potential, const std::array<double, 3>& from,
                     const std::array<double, 3>& to, double mu, double mass, double hbar,
                     double step = 0.0);

// Estimate the barrier transparency from each fragment to its nearest
// neighbor and record the links on the report.
void attach_tunneling(FragmentReport& report, const Field& potential, double mu, double mass,
                      double hbar);

struct ScalingReport {
    std::vector<double> densities;
    std::vector<double> median_count;
    std::vector<double> median_radius;
    std::vector<double> median_spacing;
    std::vector<double> median_ratio;      // spacing over radius
    bool count_nonincreasing = false;
    bool ratio_monotone = false;           // ratio grows as density drops
    stats::LinearFit radius_fit;           // median radius against 1 / ln(nc / n), deep points
    stats::LinearFit ratio_fit;            // spacing / radius against (nc / n)^(1/d)
    Warnings warnings;
};

// Pool a fragmentation sweep (outer: density, inner: disorder seed) into the
// scaling diagnostics. Densities must be ascending and below critical, with
// at least 4 of them in the deep regime n < nc / e and 20 seeds each.
ScalingReport fragmentation_scaling(const std::vector<double>& densities, double critical_density,
                                    int dimension,
                                    const std::vector<std::vector<FragmentReport>>& reports);

} // namespace bosegas

#endif
