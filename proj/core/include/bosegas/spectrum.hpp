#ifndef BOSEGAS_SPECTRUM_HPP
#define BOSEGAS_SPECTRUM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bosegas/disorder.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/rng.hpp"

namespace bosegas {

// Single-particle Hamiltonian H = -(hbar^2 / 2m) Lap + V with the second
// order stencil; the Laplacian wraps around periodic grids and assumes
// vanishing values outside otherwise.
struct HamiltonianSpec {
    Grid grid;
    std::vector<double> potential;
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
    // Upper bound on the spectral radius: max|V| plus the stencil maximum.
    double norm_bound() const;
};

void apply_hamiltonian(const HamiltonianSpec& h, const double* in, double* out);
std::vector<double> apply_hamiltonian(const HamiltonianSpec& h, const std::vector<double>& in);

struct EigenOptions {
    int count = 1;
    double tol = 1e-10;      // certified: ||H x - e x|| <= tol * norm_bound
    int max_basis = 48;
    int max_restarts = 600;
    std::uint64_t start_seed = 0x5eedULL;
};

struct EigenSet {
    std::vector<double> energies;            // ascending
    std::vector<std::vector<double>> modes;  // sum psi^2 h^d = 1; empty for the dense route
    std::vector<double> residuals;           // ||H x - e x||_2 over unit lattice norm
    int matvecs = 0;
    double scale = 0.0;                      // norm bound used by the tolerance
};

struct EigenNoConvergence : NoConvergence {
    EigenSet best;
    EigenNoConvergence(const std::string& msg, EigenSet b)
        : NoConvergence(msg), best(std::move(b)) {}
};

// Lowest eigenpairs by Lanczos with full reorthogonalization and thick
// restarts. Deterministic for fixed options.
EigenSet lowest_eigenpairs(const HamiltonianSpec& h, const EigenOptions& opt = {});

// Dense reference route (eigenvalues only unless vectors is set). Intended
// for oracle-sized problems; refuses more than 4096 points.
EigenSet dense_spectrum(const HamiltonianSpec& h, int count, bool vectors = false);

struct LocalizationMetrics {
    std::array<double, 3> centroid = {0.0, 0.0, 0.0};
    double rms_radius = 0.0;
    double ipr = 0.0;                  // integral psi^4 over (integral psi^2)^2
    double participation_volume = 0.0; // 1 / ipr: V for a uniform mode, h^d for a spike
};

// Periodic-aware moments of a mode's density. The centroid uses circular
// means on periodic axes; distances use the minimum image.
LocalizationMetrics localization_metrics(const Field& mode);

struct TailEnsembleConfig {
    Grid grid;
    DisorderSpec disorder;
    double hbar = 1.0;
    double mass = 1.0;
    Seed seed;
    int realizations = 2000;
    int levels = 1;            // lowest levels recorded per realization
    int threads = 1;
    double eigen_tol = 1e-9;
    double energy_scale = 0.0; // 0: collision scale for white-noise classes, depth scale for smooth
    std::optional<std::pair<double, double>> window;
    double auto_quantile = 0.01; // auto window: below Q_q(ground) + energy_scale
    int bootstrap = 64;
    int min_events = 50;
};

struct TailFit {
    double exponent = 0.0;
    double exponent_error = 0.0;
    double coefficient = 0.0;    // a in ln N = c - a (|E|/E0)^p
    double log_amplitude = 0.0;  // c
    double energy_scale = 0.0;
    std::pair<double, double> window = {0.0, 0.0};
    std::size_t events = 0;
    std::size_t realizations = 0;
    double fit_rms = 0.0;
    Warnings warnings;
};

// Fit ln N(E) = c - a (|E|/E0)^p to the integrated level count per volume by
// censored maximum likelihood over the recorded levels inside the window.
// The error bar is the profiled-curvature one, checked against a bootstrap
// over realizations when bootstrap > 0.
TailFit fit_integrated_dos(const std::vector<std::vector<double>>& levels_per_realization,
                           double volume, double energy_scale,
                           std::optional<std::pair<double, double>> window,
                           double auto_quantile, int min_events, int bootstrap,
                           std::uint64_t bootstrap_key = 0xb007ULL);

// Run the disorder ensemble (synthesize, diagonalize, pool) and fit the tail.
TailFit dos_tail_fit(const TailEnsembleConfig& cfg);

} // namespace bosegas

#endif
