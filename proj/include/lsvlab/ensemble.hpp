#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsvlab/linalg.hpp"
#include "lsvlab/rng.hpp"

namespace lsv {

enum class DistKind { Rademacher, StandardGaussian, UniformSymmetric, DiscreteSymmetric };

/// Law of the iid entries xi: mean 0, variance 1, symmetric. Construction
/// validates the moment conditions, so every instance is usable as-is.
class EntryDistribution {
 public:
  static EntryDistribution rademacher();
  static EntryDistribution gaussian();
  /// Uniform on [-sqrt(3), sqrt(3)].
  static EntryDistribution uniform();
  /// Finite symmetric law; throws InputError unless probabilities sum to 1,
  /// the law is symmetric, and the closed-form variance is 1.
  static EntryDistribution discrete(std::vector<double> support, std::vector<double> probs);

  /// Parse {"kind": "rademacher" | "gaussian" | "uniform" | "discrete",
  ///        "support": [...], "probs": [...]}.
  static EntryDistribution from_json(const nlohmann::json& doc);
  /// Keyword ("rademacher", "gaussian", "uniform") or an inline JSON document.
  static EntryDistribution parse(const std::string& spec);

  nlohmann::json to_json() const;

  DistKind kind() const { return kind_; }
  std::string name() const;
  double mean() const { return 0.0; }
  double variance() const { return 1.0; }
  /// psi2_estimate(*this, 16), cached at construction.
  double psi2() const { return psi2_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  bool is_continuous() const;

  /// E|xi|^p in closed form.
  double abs_moment(double p) const;
  /// Characteristic function E exp(i t xi); real because the law is symmetric.
  double char_fn(double t) const;

  friend bool operator==(const EntryDistribution&, const EntryDistribution&) = default;

 private:
  EntryDistribution(DistKind kind, std::vector<double> support, std::vector<double> probs);

  DistKind kind_;
  std::vector<double> support_;
  std::vector<double> probs_;
  double psi2_ = 0.0;
};

/// Tolerance used when validating user-supplied discrete laws.
inline constexpr double kMomentTolerance = 1e-12;

/// Default truncation of the supremum defining the subgaussian norm.
inline constexpr int kDefaultPsi2Pmax = 16;

/// Entries above which sample_matrix refuses to allocate (1 GiB of doubles).
inline constexpr std::size_t kDefaultEntryBudget = std::size_t{1} << 27;

double sample_entry(const EntryDistribution& dist, Rng& stream);

/// Fill a vector with iid draws.
Vector sample_vector(const EntryDistribution& dist, std::size_t n, Rng& stream);

struct MatrixSample {
  Matrix entries;
  std::uint64_t seed = 0;
  EntryDistribution distribution = EntryDistribution::rademacher();

  std::size_t rows() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries.cols()); }
};

/// rows x cols matrix of iid entries drawn row by row from Rng(seed).
/// Throws InputError for empty shapes and SizingError past entry_budget.
MatrixSample sample_matrix(const EntryDistribution& dist, std::size_t rows, std::size_t cols,
                           std::uint64_t seed,
                           std::size_t entry_budget = kDefaultEntryBudget);

/// max over integer p in [1, p_max] of p^{-1/2} (E|xi|^p)^{1/p}.
double psi2_estimate(const EntryDistribution& dist, int p_max);

}  // namespace lsv
