#include "levitsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "levitsim/errors.hpp"

namespace levitsim::stats {

double kolmogorov_survival(double lambda) noexcept {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

double normal_cdf(double x, double sigma) noexcept {
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

double mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double rms(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()));
}

BatchedMean batched_mean(std::span<const double> values, std::size_t batches) {
  if (batches < 2 || values.size() < batches) {
    throw DomainError("batched_mean: need at least two non-empty batches");
  }
  const std::size_t per = values.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = mean(values.subspan(b * per, per));
  const double m = mean(means);
  double var = 0.0;
  for (double x : means) var += (x - m) * (x - m);
  var /= static_cast<double>(batches - 1);
  return {m, std::sqrt(var / static_cast<double>(batches)), batches};
}

}  // namespace levitsim::stats
