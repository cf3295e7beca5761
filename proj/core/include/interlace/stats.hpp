#pragma once

#include <cmath>
#include <cstdint>

namespace interlace {

// Two-sided standard normal quantile for the confidence levels we use.
double normal_quantile_two_sided(double confidence);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

// Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

// Bernoulli frequency with its binomial standard error sqrt(p(1-p)/n).
struct Proportion {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  double estimate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }
  double stderr_() const noexcept {
    if (trials == 0) return 0.0;
    const double p = estimate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
};

// Running mean/variance over exact integer sums, so aggregation order never
// changes the result.
struct IntegerMoments {
  std::uint64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;

  void add(std::int64_t v) noexcept {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const IntegerMoments& o) noexcept {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const noexcept { return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count); }
  // Unbiased sample variance.
  double variance() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double m = mean();
    return (static_cast<double>(sum_sq) - n * m * m) / (n - 1.0);
  }
  double stderr_of_mean() const noexcept {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

}  // namespace interlace
