#include "lsvlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lsvlab/errors.hpp"

namespace lsv {

Interval wilson_interval(std::uint64_t count, std::uint64_t trials, double z) {
  if (trials == 0) throw InputError("wilson_interval: trials must be positive");
  if (count > trials) throw InputError("wilson_interval: count exceeds trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp so that the interval always contains the point estimate exactly.
  return {std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

Proportion Proportion::of(std::uint64_t count, std::uint64_t trials, double z) {
  return {count, trials, static_cast<double>(count) / static_cast<double>(trials),
          wilson_interval(count, trials, z)};
}

bool overlap_with_slack(const Interval& a, const Interval& b, double slack) {
  return a.low / slack <= b.high * slack && b.low / slack <= a.high * slack;
}

void RunningMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  count_ += other.count_;
}

double RunningMoments::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningMoments::mean_halfwidth(double z) const {
  return count_ > 1 ? z * std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

}  // namespace lsv
