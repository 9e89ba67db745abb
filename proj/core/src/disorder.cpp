#include "bosegas/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>

#include "bosegas/constants.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/fft.hpp"
#include "bosegas/parallel.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

namespace {

constexpr std::uint64_t kDisorderSalt = 0xd15c0de5a17ull;
constexpr std::size_t kNoShell = std::numeric_limits<std::size_t>::max();

std::vector<double> spectrum_on_grid(const DisorderSpec& spec, const Fft& fft) {
    const Grid& g = fft.grid();
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double q = fft.wavevector_norm(i);
        if (q == 0.0) {
            // The long-ranged variant has no finite zero-mode weight in
            // d >= 2; the ensemble is defined with that mode removed.
            const double s0 = correlator_spectrum(spec, 0.0, g.dimension);
            s[i] = std::isfinite(s0) ? s0 : 0.0;
        } else {
            s[i] = correlator_spectrum(spec, q, g.dimension);
        }
    }
    return s;
}

void require_resolution(const DisorderSpec& spec, const Grid& grid) {
    spec.validate(grid.dimension);
    if (!grid.periodic)
        throw ValidationError("disorder: spectral synthesis needs a periodic grid");
    if (spec.correlated() && grid.spacing > 0.5 * spec.corr_length)
        throw GridTooCoarse("disorder: need h <= b/2 to resolve the correlation length");
}

// Circular autocovariance per site: a(r) = (1/M) sum_x U(x) U(x+r).
std::vector<double> autocovariance(const Field& field, const Fft& fft) {
    const std::size_t m = field.size();
    std::vector<std::complex<double>> buf(m);
    for (std::size_t i = 0; i < m; ++i) buf[i] = field[i];
    fft.forward(buf);
    for (auto& z : buf) z = std::norm(z);
    fft.backward(buf);
    std::vector<double> out(m);
    const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    for (std::size_t i = 0; i < m; ++i) out[i] = buf[i].real() * scale;
    return out;
}

struct ShellMap {
    std::vector<std::size_t> shell_of_lag; // kNoShell when beyond max_lag
    std::vector<double> distance;
    std::vector<std::size_t> count;

    ShellMap(const Grid& grid, double max_lag) {
        shell_of_lag.assign(grid.size(), kNoShell);
        std::map<long long, std::size_t> by_r2;
        const double h2 = grid.spacing * grid.spacing;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto c = grid.unindex(i);
            long long r2 = 0;
            for (int a = 0; a < grid.dimension; ++a) {
                const long long d = grid.min_image(c[a], a);
                r2 += d * d;
            }
            if (h2 * static_cast<double>(r2) > max_lag * max_lag * (1.0 + 1e-12)) continue;
            auto [it, inserted] = by_r2.try_emplace(r2, by_r2.size());
            shell_of_lag[i] = it->second;
        }
        // std::map iterates keys ascending, so shells come out sorted by r2
        // but were numbered in discovery order; renumber by distance.
        std::vector<std::size_t> rank(by_r2.size());
        std::size_t next = 0;
        distance.resize(by_r2.size());
        for (const auto& [r2, id] : by_r2) {
            rank[id] = next;
            distance[next] = grid.spacing * std::sqrt(static_cast<double>(r2));
            ++next;
        }
        count.assign(by_r2.size(), 0);
        for (auto& s : shell_of_lag) {
            if (s == kNoShell) continue;
            s = rank[s];
            ++count[s];
        }
    }

    std::vector<double> shell_means(const std::vector<double>& per_lag) const {
        std::vector<double> acc(distance.size(), 0.0);
        for (std::size_t i = 0; i < shell_of_lag.size(); ++i)
            if (shell_of_lag[i] != kNoShell) acc[shell_of_lag[i]] += per_lag[i];
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] /= static_cast<double>(count[s]);
        return acc;
    }
};

} // namespace

double correlator_spectrum(const DisorderSpec& spec, double q, int dimension) {
    spec.validate(dimension);
    if (q < 0.0) throw NonPositiveInput("correlator_spectrum: q must be >= 0");
    const double b = spec.corr_length;
    const double u2 = spec.strength * spec.strength;
    switch (spec.kind) {
        case DisorderKind::Uncorrelated:
            return spec.kappa * spec.kappa;
        case DisorderKind::OrnsteinZernike:
            return spec.kappa * spec.kappa / (1.0 + b * b * q * q);
        case DisorderKind::GaussianCorrelated: {
            double bd = 1.0;
            for (int a = 0; a < dimension; ++a) bd *= b;
            return std::pow(2.0 * pi, 0.5 * dimension) * u2 * bd *
                   std::exp(-0.5 * b * b * q * q);
        }
        case DisorderKind::LorentzCorrelated:
            if (dimension == 1) return pi * u2 * b * std::exp(-b * q);
            if (q == 0.0) return std::numeric_limits<double>::infinity();
            if (dimension == 2) return 2.0 * pi * u2 * b * b * std::cyl_bessel_k(0.0, b * q);
            return 2.0 * pi * pi * u2 * b * b * std::exp(-b * q) / q;
    }
    throw ValidationError("correlator_spectrum: unknown disorder kind");
}

Field synthesize(const DisorderSpec& spec, const Grid& grid, const Seed& seed,
                 Warnings* warnings) {
    grid.validate();
    require_resolution(spec, grid);
    if (warnings && spec.correlated()) {
        for (int a = 0; a < grid.dimension; ++a)
            if (grid.extent(a) < 8.0 * spec.corr_length) {
                warnings->push_back({"short_box",
                                     "box extent below 8 correlation lengths; "
                                     "wrap-around correlations are not negligible"});
                break;
            }
    }
    const Fft fft(grid);
    const std::size_t m = grid.size();
    const std::uint64_t key = rng::derive_key(seed, kDisorderSalt);

    std::vector<std::complex<double>> buf(m);
    for (std::size_t i = 0; i < m; ++i) buf[i] = rng::normal(key, i);
    fft.forward(buf);

    const auto s = spectrum_on_grid(spec, fft);
    const double hd = grid.cell_volume();
    for (std::size_t i = 0; i < m; ++i) buf[i] *= std::sqrt(s[i] / hd);
    fft.backward(buf);

    Field out(grid);
    const double scale = 1.0 / static_cast<double>(m);
    double real2 = 0.0;
    double imag2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double re = buf[i].real() * scale;
        const double im = buf[i].imag() * scale;
        out[i] = re;
        real2 += re * re;
        imag2 += im * im;
    }
    // Real white noise in x keeps the spectral amplitudes Hermitian, so the
    // imaginary part can only be rounding error.
    if (imag2 > 1e-20 * real2)
        throw NumericalError("synthesize: synthesized field has an imaginary residue");
    return out;
}

std::vector<double> target_covariance(const DisorderSpec& spec, const Grid& grid) {
    grid.validate();
    require_resolution(spec, grid);
    const Fft fft(grid);
    const auto s = spectrum_on_grid(spec, fft);
    std::vector<std::complex<double>> buf(s.begin(), s.end());
    fft.backward(buf);
    std::vector<double> out(buf.size());
    const double scale = 1.0 / (static_cast<double>(grid.size()) * grid.cell_volume());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real() * scale;
    return out;
}

CorrelatorAccumulator::CorrelatorAccumulator(const Grid& grid, double max_lag)
    : grid_(grid), max_lag_(max_lag) {
    grid_.validate();
    if (!(max_lag > 0.0)) throw NonPositiveInput("CorrelatorAccumulator: max_lag must be > 0");
    ShellMap map(grid_, max_lag);
    shell_of_lag_ = std::move(map.shell_of_lag);
    shell_distance_ = std::move(map.distance);
    shell_count_ = std::move(map.count);
    shell_samples_.resize(shell_distance_.size());
}

void CorrelatorAccumulator::add(const Field& field) {
    field.check_consistent();
    if (!field.grid.same_shape(grid_))
        throw ShapeMismatch("CorrelatorAccumulator: field grid does not match");
    const Fft fft(grid_);
    const auto cov = autocovariance(field, fft);
    std::vector<double> acc(shell_distance_.size(), 0.0);
    for (std::size_t i = 0; i < cov.size(); ++i)
        if (shell_of_lag_[i] != kNoShell) acc[shell_of_lag_[i]] += cov[i];
    for (std::size_t s = 0; s < acc.size(); ++s)
        shell_samples_[s].push_back(acc[s] / static_cast<double>(shell_count_[s]));
    mean_samples_.push_back(field.mean());
}

CorrelatorEstimate CorrelatorAccumulator::finalize(const DisorderSpec& spec) const {
    if (mean_samples_.size() < 2)
        throw EnsembleTooSmall("CorrelatorAccumulator: need at least 2 realizations");
    CorrelatorEstimate est;
    est.realizations = mean_samples_.size();
    est.distance = shell_distance_;
    est.multiplicity = shell_count_;
    est.value.resize(shell_distance_.size());
    est.std_error.resize(shell_distance_.size());
    for (std::size_t s = 0; s < shell_distance_.size(); ++s) {
        est.value[s] = stats::mean(shell_samples_[s]);
        est.std_error[s] = stats::jackknife_stderr(shell_samples_[s]);
    }
    ShellMap map(grid_, max_lag_);
    est.target = map.shell_means(target_covariance(spec, grid_));
    est.mean_field = stats::mean(mean_samples_);
    est.mean_field_error = stats::stderr_mean(mean_samples_);
    return est;
}

CorrelatorEstimate measure_correlator(const DisorderSpec& spec, const Grid& grid,
                                      const Seed& seed, std::size_t realizations,
                                      double max_lag, int threads) {
    if (realizations < 2)
        throw EnsembleTooSmall("measure_correlator: need at least 2 realizations");
    require_resolution(spec, grid);
    ShellMap map(grid, max_lag);
    const std::size_t n_shell = map.distance.size();
    std::vector<std::vector<double>> samples(realizations);
    std::vector<double> means(realizations);
    parallel_for(realizations, threads, [&](std::size_t r) {
        const Field u = synthesize(spec, grid, seed.with_realization(seed.realization + r));
        const Fft fft(grid);
        samples[r] = map.shell_means(autocovariance(u, fft));
        means[r] = u.mean();
    });

    CorrelatorEstimate est;
    est.realizations = realizations;
    est.distance = map.distance;
    est.multiplicity = map.count;
    est.value.resize(n_shell);
    est.std_error.resize(n_shell);
    std::vector<double> column(realizations);
    for (std::size_t s = 0; s < n_shell; ++s) {
        for (std::size_t r = 0; r < realizations; ++r) column[r] = samples[r][s];
        est.value[s] = stats::mean(column);
        est.std_error[s] = stats::jackknife_stderr(column);
    }
    est.target = map.shell_means(target_covariance(spec, grid));
    est.mean_field = stats::mean(means);
    est.mean_field_error = stats::stderr_mean(means);
    return est;
}

double effective_disorder_frequency(double u0, double b, double mass) {
    if (!(u0 > 0.0) || !(b > 0.0) || !(mass > 0.0))
        throw NonPositiveInput("effective_disorder_frequency: inputs must be > 0");
    return std::sqrt(2.0 * u0 / (mass * b * b));
}

} // namespace bosegas
