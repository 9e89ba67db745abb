#ifndef BOSEGAS_STATS_HPP
#define BOSEGAS_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bosegas::stats {

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);      // unbiased, needs n >= 2
double stderr_mean(const std::vector<double>& x);   // sqrt(var / n)
double jackknife_stderr(const std::vector<double>& x);

// p-quantile of a sample (linear interpolation between order statistics).
double quantile(std::vector<double> x, double p);
double median(std::vector<double> x);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;
};
// Ordinary or weighted least squares; weights empty means uniform.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& weights = {});

struct RankCorrelation {
    double rho = 0.0;   // Spearman
    double zscore = 0.0; // rho * sqrt(n - 1)
};
RankCorrelation spearman(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic bootstrap resample indices for replicate r.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t key, std::size_t replicate);

} // namespace bosegas::stats

#endif
