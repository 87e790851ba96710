#pragma once

#include <cstdint>

namespace lsv {

/// Two-sided standard normal quantile for 99% coverage.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low = 0.0;
  double high = 0.0;

  double halfwidth() const { return 0.5 * (high - low); }
  bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for count successes out of trials.
Interval wilson_interval(std::uint64_t count, std::uint64_t trials, double z = kZ99);

/// Point estimate with its Wilson interval.
struct Proportion {
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval ci;

  static Proportion of(std::uint64_t count, std::uint64_t trials, double z = kZ99);
};

/// True when [a.low, a.high] and [b.low, b.high] intersect after widening
/// each interval multiplicatively: [low / slack, high * slack].
bool overlap_with_slack(const Interval& a, const Interval& b, double slack);

/// Running mean and variance (Welford).
class RunningMoments {
 public:
  void add(double x);
  void merge(const RunningMoments& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  /// Half-width of the normal-approximation interval for the mean.
  double mean_halfwidth(double z = kZ99) const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace lsv
