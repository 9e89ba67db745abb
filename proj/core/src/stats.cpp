#include "bosegas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bosegas/errors.hpp"
#include "bosegas/rng.hpp"

namespace bosegas::stats {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw EnsembleTooSmall("stats::mean: empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw EnsembleTooSmall("stats::variance: need n >= 2");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double stderr_mean(const std::vector<double>& x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

double jackknife_stderr(const std::vector<double>& x) {
    // For the plain mean the jackknife reduces to stderr_mean; kept as the
    // named estimator so shell averages and ratios share one code path.
    const std::size_t n = x.size();
    if (n < 2) throw EnsembleTooSmall("stats::jackknife_stderr: need n >= 2");
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    const double full = total / static_cast<double>(n);
    double s = 0.0;
    for (double v : x) {
        const double loo = (total - v) / static_cast<double>(n - 1);
        s += (loo - full) * (loo - full);
    }
    return std::sqrt(s * static_cast<double>(n - 1) / static_cast<double>(n));
}

double quantile(std::vector<double> x, double p) {
    if (x.empty()) throw EnsembleTooSmall("stats::quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw ValidationError("stats::quantile: p must be in [0, 1]");
    std::sort(x.begin(), x.end());
    const double pos = p * static_cast<double>(x.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= x.size()) return x.back();
    const double t = pos - static_cast<double>(lo);
    return x[lo] * (1.0 - t) + x[lo + 1] * t;
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& weights) {
    if (x.size() != y.size() || (!weights.empty() && weights.size() != x.size()))
        throw ShapeMismatch("stats::linear_fit: length mismatch");
    if (x.size() < 3) throw EnsembleTooSmall("stats::linear_fit: need n >= 3");
    const std::size_t n = x.size();
    double sw = 0.0, sx = 0.0, sy = 0.0;
    auto w_at = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
    for (std::size_t i = 0; i < n; ++i) {
        sw += w_at(i);
        sx += w_at(i) * x[i];
        sy += w_at(i) * y[i];
    }
    const double xb = sx / sw;
    const double yb = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w_at(i) * (x[i] - xb) * (x[i] - xb);
        sxy += w_at(i) * (x[i] - xb) * (y[i] - yb);
    }
    if (!(sxx > 0.0)) throw ValidationError("stats::linear_fit: degenerate abscissa");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = yb - fit.slope * xb;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        chi2 += w_at(i) * r * r;
    }
    fit.residual_rms = std::sqrt(chi2 / sw);
    fit.slope_stderr = std::sqrt(chi2 / (static_cast<double>(n - 2) * sxx));
    return fit;
}

RankCorrelation spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ShapeMismatch("stats::spearman: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw EnsembleTooSmall("stats::spearman: need n >= 3");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t pos = 0; pos < idx.size();) {
            std::size_t end = pos;
            while (end + 1 < idx.size() && v[idx[end + 1]] == v[idx[pos]]) ++end;
            const double shared = 0.5 * static_cast<double>(pos + end);
            for (std::size_t k = pos; k <= end; ++k) r[idx[k]] = shared;
            pos = end + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    const double rb = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (rx[i] - rb) * (rx[i] - rb);
        syy += (ry[i] - rb) * (ry[i] - rb);
        sxy += (rx[i] - rb) * (ry[i] - rb);
    }
    RankCorrelation rc;
    if (sxx > 0.0 && syy > 0.0) rc.rho = sxy / std::sqrt(sxx * syy);
    rc.zscore = rc.rho * std::sqrt(static_cast<double>(n - 1));
    return rc;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t key, std::size_t replicate) {
    if (n == 0) throw EnsembleTooSmall("stats::bootstrap_indices: empty sample");
    std::vector<std::size_t> idx(n);
    const std::uint64_t sub = rng::mix(key ^ rng::mix(replicate + 0x9e3779b97f4a7c15ull));
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = static_cast<std::size_t>(rng::bits(sub, i) % n);
    return idx;
}

} // namespace bosegas::stats
