#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lsv {

/// Role tags mixed into substream seeds so that different consumers of the
/// same (seed, trial) pair never share a stream.
enum class StreamRole : std::uint64_t {
  Matrix = 0x6d61747269780001ULL,
  Row = 0x726f770000000002ULL,
  Vector = 0x766563746f720003ULL,
  Gaussian = 0x676175737300004ULL,
  Reference = 0x7265666572000005ULL,
  Probe = 0x70726f6265000006ULL,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the substream for one trial. A pure function of its arguments, so
/// trial i draws the same numbers no matter which worker runs it.
constexpr std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index,
                                       StreamRole role) {
  return mix64(mix64(mix64(base) ^ index) ^ static_cast<std::uint64_t>(role));
}

/// Random stream with platform-independent variates. std::mt19937_64 output
/// is fixed by the standard; the standard distributions are not, so uniform
/// and normal variates are derived here by fixed formulas.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lsv
