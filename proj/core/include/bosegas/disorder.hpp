#ifndef BOSEGAS_DISORDER_HPP
#define BOSEGAS_DISORDER_HPP

#include <cstddef>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/scales.hpp"

namespace bosegas {

// Spectral density of the chosen correlator at wavenumber magnitude q,
// in the given dimension. Diverges at q = 0 for the long-ranged variant
// in d >= 2; synthesis pins that mode to zero (see below).
double correlator_spectrum(const DisorderSpec& spec, double q, int dimension);

// Gaussian random potential on a torus with the exact mode-sum covariance
//   C(r) = (1/(M h^d)) sum_q S(q) exp(i q . r),
// where S is the correlator spectrum sampled on the grid's wrapped modes and
// the q = 0 amplitude is set to zero whenever S diverges there. The map is a
// pure function of (spec, grid, seed). Requires a periodic grid and
// h <= b/2 for correlated variants; a box shorter than 8b per axis gets a
// warning (wrap-around correlations become visible). Asserts that the
// synthesized field is real to 1e-10.
Field synthesize(const DisorderSpec& spec, const Grid& grid, const Seed& seed,
                 Warnings* warnings = nullptr);

// The covariance the synthesized ensemble actually has on the lattice,
// indexed by lag vector (same layout as the grid). Reference for tests and
// for the measured-correlator comparison.
std::vector<double> target_covariance(const DisorderSpec& spec, const Grid& grid);

struct CorrelatorEstimate {
    std::vector<double> distance;          // shell radii (exact lattice distances)
    std::vector<double> value;             // ensemble mean of K(r)
    std::vector<double> std_error;         // jackknife over realizations
    std::vector<double> target;            // lattice mode-sum covariance per shell
    std::vector<std::size_t> multiplicity; // lag vectors per shell
    double mean_field = 0.0;               // ensemble mean of spatial averages
    double mean_field_error = 0.0;
    std::size_t realizations = 0;
};

// Streaming two-point estimator. Shells group lag vectors by exact squared
// minimum-image distance up to max_lag. add() costs two transforms.
class CorrelatorAccumulator {
public:
    CorrelatorAccumulator(const Grid& grid, double max_lag);
    void add(const Field& field);
    // Jackknife needs at least two realizations.
    CorrelatorEstimate finalize(const DisorderSpec& spec) const;

private:
    Grid grid_;
    double max_lag_ = 0.0;
    std::vector<std::size_t> shell_of_lag_;   // lag index -> shell, or npos
    std::vector<double> shell_distance_;
    std::vector<std::size_t> shell_count_;
    std::vector<std::vector<double>> shell_samples_; // per shell, per realization
    std::vector<double> mean_samples_;
};

CorrelatorEstimate measure_correlator(const DisorderSpec& spec, const Grid& grid,
                                      const Seed& seed, std::size_t realizations,
                                      double max_lag, int threads = 1);

// Characteristic oscillation frequency of a particle trapped by potential
// fluctuations of amplitude u0 over length b: sqrt(2 u0 / (m b^2)).
double effective_disorder_frequency(double u0, double b, double mass);

} // namespace bosegas

#endif
