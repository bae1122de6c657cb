#pragma once

#include <functional>
#include <span>
#include <vector>

namespace levitsim::stats {

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
  bool passes(double alpha) const noexcept { return p_value > alpha; }
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function Q(lambda).
double kolmogorov_survival(double lambda) noexcept;

double normal_cdf(double x, double sigma) noexcept;

struct BatchedMean {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t batches = 0;
};

/// Mean with a standard error estimated from contiguous batch means, which
/// stays honest for autocorrelated series.
BatchedMean batched_mean(std::span<const double> values, std::size_t batches);

double mean(std::span<const double> values) noexcept;
double rms(std::span<const double> values) noexcept;

}  // namespace levitsim::stats
