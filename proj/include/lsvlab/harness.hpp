#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsvlab/ensemble.hpp"
#include "lsvlab/stats.hpp"

namespace lsv {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Thresholds 0 < eps < kMinResolvableEps are refused.
inline constexpr double kMinResolvableEps = 1e-8;

/// {eps_min 2^j : j >= 0} intersected with (0, eps_max], ascending. The upper
/// end is inclusive. Throws ConfigError unless 0 < eps_min <= eps_max.
std::vector<double> dyadic_grid(double eps_min, double eps_max);

struct ExperimentConfig {
  EntryDistribution dist = EntryDistribution::gaussian();
  std::size_t n = 64;
  std::uint64_t trials = 1000;
  std::vector<double> eps_grid;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string output = "out";
  /// Matrices profiled for the events summary; 0 disables it.
  std::uint64_t event_trials = 100;

  /// Fields: dist (keyword or object), n, trials, eps_grid (array, or
  /// {"dyadic": [min, max]}), seed, workers, output, event_trials.
  /// Throws ConfigError naming the offending field.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;

  /// n >= 8, trials >= 1000, eps ascending, each 0 or >= kMinResolvableEps.
  void validate() const;
};

struct TailEstimate {
  EntryDistribution dist = EntryDistribution::gaussian();
  std::size_t n = 0;
  std::vector<double> eps_grid;
  std::vector<std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::vector<double> estimates;
  std::vector<Interval> ci;
  std::uint64_t seed = 0;
  /// Samples whose sigma_n is numerically zero (the singular atom).
  std::uint64_t singular_count = 0;
};

/// P(sigma_n(M) <= eps n^{-1/2}) for every eps on one sample of `trials`
/// matrices. Needs n >= 2, trials >= 1 and a valid eps grid; the stricter
/// sizing rules live in ExperimentConfig::validate.
TailEstimate tail_probability(const ExperimentConfig& cfg);

/// min(eps, 1).
double edelman_reference(double eps);
/// min(1, eps + exp(-c_exp n)).
double spielman_teng_reference(double eps, std::size_t n, double c_exp);

struct CompareReport {
  TailEstimate subject;
  TailEstimate gaussian;
  /// subject / gaussian estimate; NaN where the Gaussian count is 0.
  std::vector<double> ratio;
  /// Wilson intervals intersect after widening by kCompareSlack.
  std::vector<bool> overlap;
  bool all_overlap = false;
  double max_discrepancy = 0.0;
};

inline constexpr double kCompareSlack = 1.15;

/// tail_probability for cfg.dist and for the standard Gaussian law on an
/// independent substream, same n, grid and trials.
CompareReport universality_compare(const EntryDistribution& dist, const ExperimentConfig& cfg);

/// Exit codes of run_experiment.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitUnwritable = 3 };

/// Load the config, estimate tails and an events summary, and write
/// tail.csv, events.csv and manifest.json into cfg.output.
int run_experiment(const std::string& config_path, std::ostream& diagnostics);
/// Same, from an in-memory configuration.
int run_experiment(const ExperimentConfig& cfg, std::ostream& diagnostics);

}  // namespace lsv
