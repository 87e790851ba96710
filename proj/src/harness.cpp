#include "lsvlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lsvlab/errors.hpp"
#include "lsvlab/events.hpp"
#include "lsvlab/parallel.hpp"
#include "lsvlab/report.hpp"
#include "lsvlab/rng.hpp"
#include "lsvlab/spectra.hpp"

namespace lsv {

namespace {

using nlohmann::json;

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("eps_grid: grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = grid[i];
    if (!std::isfinite(e) || e < 0.0) throw ConfigError("eps_grid: values must be finite and >= 0");
    if (e > 0.0 && e < kMinResolvableEps) {
      throw ConfigError("eps_grid: eps = " + format_double(e) +
                        " is below the resolvable floor 1e-8; exponentially small tails are out "
                        "of reach of plain Monte Carlo");
    }
    if (i > 0 && !(e > grid[i - 1])) throw ConfigError("eps_grid: values must be strictly ascending");
  }
}

template <class T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw ConfigError(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + name + "': " + e.what());
  }
}

template <class T>
T field_or(const json& doc, const char* name, T fallback) {
  return doc.contains(name) ? field<T>(doc, name) : fallback;
}

}  // namespace

std::vector<double> dyadic_grid(double eps_min, double eps_max) {
  if (!(eps_min > 0.0) || !std::isfinite(eps_max) || !(eps_min <= eps_max)) {
    throw ConfigError("dyadic grid: need 0 < eps_min <= eps_max");
  }
  std::vector<double> out;
  for (double e = eps_min; e <= eps_max * (1.0 + 1e-12); e *= 2.0) out.push_back(e);
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  if (!doc.contains("dist")) throw ConfigError("missing field 'dist'");
  try {
    const json& d = doc.at("dist");
    cfg.dist = d.is_string() ? EntryDistribution::parse(d.get<std::string>())
                             : EntryDistribution::from_json(d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'dist': ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field 'dist': ") + e.what());
  }
  const auto n = field<std::int64_t>(doc, "n");
  const auto trials = field<std::int64_t>(doc, "trials");
  if (n < 0) throw ConfigError("field 'n': must be positive");
  if (trials < 0) throw ConfigError("field 'trials': must be positive");
  cfg.n = static_cast<std::size_t>(n);
  cfg.trials = static_cast<std::uint64_t>(trials);

  if (!doc.contains("eps_grid")) throw ConfigError("missing field 'eps_grid'");
  const json& g = doc.at("eps_grid");
  try {
    if (g.is_array()) {
      cfg.eps_grid = g.get<std::vector<double>>();
    } else if (g.is_object() && g.contains("dyadic")) {
      const auto range = g.at("dyadic").get<std::vector<double>>();
      if (range.size() != 2) throw ConfigError("field 'eps_grid': dyadic needs [min, max]");
      cfg.eps_grid = dyadic_grid(range[0], range[1]);
    } else {
      throw ConfigError("field 'eps_grid': expected an array or {\"dyadic\": [min, max]}");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field 'eps_grid': ") + e.what());
  }

  const auto seed = field_or<std::uint64_t>(doc, "seed", 1);
  const auto workers = field_or<std::int64_t>(doc, "workers", 0);
  if (workers < 0) throw ConfigError("field 'workers': must be >= 0");
  cfg.seed = seed;
  cfg.workers = effective_workers(static_cast<unsigned>(workers));
  cfg.output = field_or<std::string>(doc, "output", "out");
  const auto event_trials = field_or<std::int64_t>(doc, "event_trials", 100);
  if (event_trials < 0) throw ConfigError("field 'event_trials': must be >= 0");
  cfg.event_trials = static_cast<std::uint64_t>(event_trials);
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

json ExperimentConfig::to_json() const {
  return json{{"dist", dist.to_json()}, {"n", n},           {"trials", trials},
              {"eps_grid", eps_grid},   {"seed", seed},     {"workers", workers},
              {"output", output},       {"event_trials", event_trials}};
}

void ExperimentConfig::validate() const {
  if (n < 8) throw ConfigError("field 'n': must be >= 8");
  if (trials < 1000) throw ConfigError("field 'trials': must be >= 1000");
  if (workers == 0) throw ConfigError("field 'workers': must be >= 1");
  check_grid(eps_grid);
}

TailEstimate tail_probability(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw InputError("tail_probability: n must be >= 2");
  if (cfg.trials == 0) throw InputError("tail_probability: trials must be positive");
  check_grid(cfg.eps_grid);

  const std::size_t m = cfg.eps_grid.size();
  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  std::vector<double> thresholds(m);
  for (std::size_t i = 0; i < m; ++i) thresholds[i] = cfg.eps_grid[i] / root_n;

  // Layout: [count per eps | singular samples].
  using Tally = std::vector<std::uint64_t>;
  const Tally counts = run_trials(
      cfg.trials, std::max(1u, cfg.workers), Tally(m + 1, 0),
      [&](std::uint64_t t, Tally& tally) {
        const MatrixSample s = sample_matrix(cfg.dist, cfg.n, cfg.n,
                                             substream_seed(cfg.seed, t, StreamRole::Matrix));
        const double sigma = least_singular_value(s.entries);
        if (sigma <= kRankTolerance * s.entries.norm()) ++tally[m];
        for (std::size_t i = 0; i < m; ++i) {
          if (sigma <= thresholds[i]) ++tally[i];
        }
      },
      [](Tally& acc, const Tally& block) {
        for (std::size_t i = 0; i < block.size(); ++i) acc[i] += block[i];
      });

  TailEstimate out;
  out.dist = cfg.dist;
  out.n = cfg.n;
  out.eps_grid = cfg.eps_grid;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.singular_count = counts[m];
  for (std::size_t i = 0; i < m; ++i) {
    const Proportion p = Proportion::of(counts[i], cfg.trials);
    out.counts.push_back(counts[i]);
    out.estimates.push_back(p.estimate);
    out.ci.push_back(p.ci);
  }
  return out;
}

double edelman_reference(double eps) {
  if (!(eps >= 0.0)) throw InputError("edelman_reference: eps must be >= 0");
  return std::min(eps, 1.0);
}

double spielman_teng_reference(double eps, std::size_t n, double c_exp) {
  if (!(eps >= 0.0)) throw InputError("spielman_teng_reference: eps must be >= 0");
  if (!(c_exp > 0.0)) throw InputError("spielman_teng_reference: c_exp must be positive");
  return std::min(1.0, eps + std::exp(-c_exp * static_cast<double>(n)));
}

CompareReport universality_compare(const EntryDistribution& dist, const ExperimentConfig& cfg) {
  ExperimentConfig subject = cfg;
  subject.dist = dist;
  ExperimentConfig reference = cfg;
  reference.dist = EntryDistribution::gaussian();
  reference.seed = substream_seed(cfg.seed, 0, StreamRole::Reference);

  CompareReport r;
  r.subject = tail_probability(subject);
  r.gaussian = tail_probability(reference);
  r.all_overlap = true;
  for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
    const double g = r.gaussian.estimates[i];
    r.ratio.push_back(r.gaussian.counts[i] == 0 ? std::nan("") : r.subject.estimates[i] / g);
    const bool ok = overlap_with_slack(r.subject.ci[i], r.gaussian.ci[i], kCompareSlack);
    r.overlap.push_back(ok);
    r.all_overlap = r.all_overlap && ok;
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.subject.estimates[i] - g));
  }
  return r;
}

int run_experiment(const std::string& config_path, std::ostream& diagnostics) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::load(config_path);
  } catch (const ConfigError& e) {
    diagnostics << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_experiment(cfg, diagnostics);
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& diagnostics) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    diagnostics << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  const fs::path tail_path = dir / "tail.csv";
  const fs::path events_path = dir / "events.csv";
  const fs::path manifest_path = dir / "manifest.json";
  {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream probe(manifest_path, std::ios::app);
    if (ec || !probe) {
      diagnostics << "cannot write to output directory '" << cfg.output << "'\n";
      return kExitUnwritable;
    }
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const TailEstimate tail = tail_probability(cfg);

    std::vector<EventProfile> profiles;
    if (cfg.n >= 16 && cfg.event_trials > 0) {
      using Tally = std::vector<EventProfile>;
      profiles = run_trials(
          cfg.event_trials, cfg.workers, Tally{},
          [&](std::uint64_t t, Tally& tally) {
            const MatrixSample s = sample_matrix(cfg.dist, cfg.n, cfg.n,
                                                 substream_seed(cfg.seed, t, StreamRole::Matrix));
            tally.push_back(regularity_profile(s.entries));
          },
          [](Tally& acc, const Tally& block) { acc.insert(acc.end(), block.begin(), block.end()); });
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream tail_csv;
    write_tail_csv(tail_csv, tail);
    std::ostringstream events_csv;
    write_event_summary_csv(events_csv, profiles);

    const std::time_t now = std::time(nullptr);
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    const nlohmann::json manifest{
        {"config", cfg.to_json()},
        {"seed", cfg.seed},
        {"library_version", kLibraryVersion},
        {"finished_at", stamp.str()},
        {"wall_time_seconds", seconds},
        {"singular_count", tail.singular_count},
        {"files", {"tail.csv", "events.csv"}}};

    std::ofstream tail_out(tail_path, std::ios::trunc);
    std::ofstream events_out(events_path, std::ios::trunc);
    std::ofstream manifest_out(manifest_path, std::ios::trunc);
    if (!tail_out || !events_out || !manifest_out) {
      diagnostics << "cannot write to output directory '" << cfg.output << "'\n";
      return kExitUnwritable;
    }
    tail_out << tail_csv.str();
    events_out << events_csv.str();
    manifest_out << manifest.dump(2) << '\n';
    if (!tail_out || !events_out || !manifest_out) {
      diagnostics << "write to '" << cfg.output << "' failed\n";
      return kExitUnwritable;
    }
  } catch (const std::exception& e) {
    diagnostics << "experiment failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace lsv
