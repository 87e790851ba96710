#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsvlab/bump.hpp"
#include "lsvlab/corrector.hpp"
#include "lsvlab/ensemble.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/events.hpp"
#include "lsvlab/harness.hpp"
#include "lsvlab/parallel.hpp"
#include "lsvlab/report.hpp"
#include "lsvlab/rng.hpp"
#include "lsvlab/secular.hpp"
#include "lsvlab/spectra.hpp"
#include "lsvlab/structure.hpp"

namespace {

using namespace lsv;

struct Common {
  std::string config;
  std::size_t n = 64;
  std::string dist = "gaussian";
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string out = "-";
  unsigned workers = 0;
  std::string ell = "auto";
};

void add_common(CLI::App* app, Common& c, bool with_out = true) {
  app->add_option("--n", c.n, "matrix size");
  app->add_option("--dist", c.dist, "entry law: rademacher, gaussian, uniform or discrete:...");
  app->add_option("--trials", c.trials, "Monte Carlo trials");
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--workers", c.workers, "worker threads (0 = default)");
  if (with_out) app->add_option("--out", c.out, "output file, - for stdout");
}

TrialSetup setup_of(const Common& c) {
  return TrialSetup{c.trials, c.seed, effective_workers(c.workers)};
}

// Writes through `fn` to the file named by path, or stdout for "-".
template <class F>
int emit(const std::string& path, F&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return kExitOk;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "cannot write " << path << '\n';
    return kExitUnwritable;
  }
  fn(os);
  return os ? kExitOk : kExitUnwritable;
}

// Spectral data of one reference M* drawn from the Matrix substream of
// (seed, 0). Redraws a few times if M* is rank deficient.
SpectralSummary reference_summary(const EntryDistribution& dist, std::size_t n, std::uint64_t seed,
                                  std::size_t k) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    const auto m = sample_matrix(dist, n - 1, n, substream_seed(seed, attempt, StreamRole::Probe));
    auto s = smallest_singular_pairs(m.entries, k);
    if (s.sigma.back() > kRankTolerance * std::sqrt(m.entries.squaredNorm())) return s;
  }
  throw DegenerateError("no full-rank reference matrix found");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == "inf") out.push_back(std::numeric_limits<double>::infinity());
    else out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (double v : parse_list(s)) out.push_back(static_cast<std::size_t>(v));
  return out;
}

std::vector<double> eps_from(const std::string& list, const std::vector<double>& dyadic) {
  if (dyadic.size() == 2) return dyadic_grid(dyadic[0], dyadic[1]);
  return parse_list(list);
}

ExperimentConfig config_of(const Common& c, const std::vector<double>& eps) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = ExperimentConfig::load(c.config);
  else {
    cfg.dist = EntryDistribution::parse(c.dist);
    cfg.n = c.n;
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.eps_grid = eps;
  }
  cfg.workers = effective_workers(c.workers ? c.workers : cfg.workers);
  return cfg;
}

Vector builtin_vector(const std::string& spec) {
  // ones:N, golden, random:N:seed, or a file of whitespace-separated numbers.
  auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (head == "golden") {
    Vector v(2);
    v << 1.0, std::numbers::phi;
    return v / v.norm();
  }
  if (head == "ones") {
    const auto n = static_cast<Eigen::Index>(std::stoul(spec.substr(colon + 1)));
    return Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  }
  if (head == "random") {
    const std::string rest = spec.substr(colon + 1);
    const auto c2 = rest.find(':');
    const auto n = static_cast<std::size_t>(std::stoul(rest.substr(0, c2)));
    const std::uint64_t s = c2 == std::string::npos ? 1 : std::stoull(rest.substr(c2 + 1));
    Rng rng(substream_seed(s, 0, StreamRole::Vector));
    Vector v = sample_vector(EntryDistribution::gaussian(), n, rng);
    return v / v.norm();
  }
  std::ifstream in(spec);
  if (!in) throw InputError("cannot read vector file " + spec);
  std::vector<double> xs;
  double x;
  while (in >> x) xs.push_back(x);
  if (xs.empty()) throw InputError("empty vector file " + spec);
  return Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lsv-lab: least singular value experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  Common c;
  std::string eps_list = "0.01,0.02,0.05,0.1,0.2,0.5";
  std::vector<double> eps_dyadic;

  auto* tail = app.add_subcommand("tail", "tail probabilities of sqrt(n) sigma_n");
  tail->add_option("--config", c.config, "JSON experiment config");
  add_common(tail, c, false);
  tail->add_option("--eps", eps_list, "comma-separated thresholds");
  tail->add_option("--eps-dyadic", eps_dyadic, "min max of a dyadic grid")->expected(2);
  tail->add_option("--out", c.out, "output directory");

  auto* compare = app.add_subcommand("compare", "tail against the Gaussian ensemble");
  compare->add_option("--config", c.config, "JSON experiment config");
  add_common(compare, c);
  compare->add_option("--eps", eps_list, "comma-separated thresholds");
  compare->add_option("--eps-dyadic", eps_dyadic, "min max of a dyadic grid")->expected(2);

  double sec_eps = 0.5;
  auto* secular = app.add_subcommand("secular-check", "secular solver against the SVD");
  add_common(secular, c);
  secular->add_option("--eps", sec_eps, "threshold for the implication checks");

  auto* chi = app.add_subcommand("chi-check", "full and truncated correction factors");
  add_common(chi, c);
  chi->add_option("--ell", c.ell, "truncation level or auto");

  bool no_lcd = false;
  auto* events = app.add_subcommand("events", "event indicators per sampled matrix");
  add_common(events, c);
  events->add_flag("--no-lcd", no_lcd, "skip the LCD scan");
  bool summary_only = false;
  events->add_flag("--summary", summary_only, "write the summary table only");

  auto* smallball = app.add_subcommand("smallball", "small-ball probabilities of the kernel");
  add_common(smallball, c);
  smallball->add_option("--eps", eps_list, "comma-separated thresholds");

  double dec_eps = 0.2;
  std::string t_list = "0,1,2,3";
  bool waive = false;
  auto* decouple = app.add_subcommand("decouple", "joint small ball and tail");
  add_common(decouple, c);
  decouple->add_option("--eps", dec_eps, "small-ball threshold (inf allowed)");
  decouple->add_option("--t", t_list, "comma-separated tail levels");
  decouple->add_flag("--waive-orthogonality", waive, "allow non-orthogonal u, w");

  double nd_eps = 0.1;
  double c_small = 0.5;
  std::string k_list = "4,9,16";
  auto* negdep = app.add_subcommand("negdep", "small ball against small projections");
  add_common(negdep, c);
  negdep->add_option("--eps", nd_eps, "small-ball threshold");
  negdep->add_option("--c-small", c_small, "projection threshold constant (inf allowed)");
  negdep->add_option("--k", k_list, "comma-separated projection counts");

  std::string st_k = "1,2,3,4,5";
  std::string st_t = "1,2,4,10";
  double c_lower = 0.1;
  auto* sigtails = app.add_subcommand("sigtails", "tails of sigma_{n-k}(M*)");
  add_common(sigtails, c);
  sigtails->add_option("--k", st_k, "comma-separated k");
  sigtails->add_option("--t", st_t, "comma-separated upper-tail levels");
  sigtails->add_option("--c", c_lower, "lower-tail constant");

  double scale = 4.0;
  auto* lindeberg = app.add_subcommand("lindeberg", "Lindeberg exchange gap");
  add_common(lindeberg, c);
  lindeberg->add_option("--scale", scale, "bump test function scale");

  std::string vector_spec = "ones:16";
  double gamma = 0.5;
  double alpha = 1.0;
  double cap = 10.0;
  auto* lcdcmd = app.add_subcommand("lcd", "capped LCD scan");
  lcdcmd->add_option("--vector", vector_spec, "file, ones:N, golden or random:N:seed");
  lcdcmd->add_option("--gamma", gamma, "gamma");
  lcdcmd->add_option("--alpha", alpha, "alpha");
  lcdcmd->add_option("--cap", cap, "scan cap");
  lcdcmd->add_option("--workers", c.workers, "worker threads");
  lcdcmd->add_option("--out", c.out, "output file");

  double grid_max = 40.0;
  double step = 0.25;
  auto* bumpcmd = app.add_subcommand("bump", "tabulate the bump function");
  bumpcmd->add_option("--grid-max", grid_max, "half-width of the grid");
  bumpcmd->add_option("--step", step, "grid step");
  bumpcmd->add_option("--out", c.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*tail) {
      ExperimentConfig cfg = config_of(c, eps_from(eps_list, eps_dyadic));
      if (c.out != "-") cfg.output = c.out;
      return run_experiment(cfg, std::cerr);
    }
    if (*compare) {
      ExperimentConfig cfg = config_of(c, eps_from(eps_list, eps_dyadic));
      cfg.validate();
      const auto r = universality_compare(cfg.dist, cfg);
      const int code = emit(c.out, [&](std::ostream& os) { write_compare_csv(os, r); });
      std::cerr << "all_overlap=" << r.all_overlap
                << " max_discrepancy=" << format_double(r.max_discrepancy) << '\n';
      return code;
    }
    const auto dist = EntryDistribution::parse(c.dist);
    const TrialSetup setup = setup_of(c);

    if (*secular) {
      return emit(c.out, [&](std::ostream& os) {
        os << "trial,max_rel_error,max_abs_error_near_zero,sigma_n_svd,sigma_n_secular,flag,skipped,"
              "forward_ok,converse_ok\n";
        for (std::uint64_t t = 0; t < c.trials; ++t) {
          const auto m = sample_matrix(dist, c.n, c.n, substream_seed(c.seed, t, StreamRole::Matrix));
          const Matrix a = m.entries;
          const auto svd = singular_values(a);
          const auto p = SecularProblem::from_split(without_last_row(a), last_row(a));
          const auto sec = secular_spectrum(p);
          const double floor = static_cast<double>(c.n) * 0x1.0p-52 * svd.front();
          // values within n ulps of sigma_1 only carry absolute accuracy
          double worst = 0.0;
          double worst_abs = 0.0;
          for (std::size_t i = 0; i < svd.size(); ++i) {
            const double err = std::abs(sec[i] - svd[i]);
            if (svd[i] > floor) worst = std::max(worst, err / svd[i]);
            else worst_abs = std::max(worst_abs, err);
          }
          const auto root = secular_least(p);
          const auto imp = verify_update_implications(a, sec_eps);
          os << t << ',' << format_double(worst) << ',' << format_double(worst_abs) << ','
             << format_double(svd.back()) << ','
             << format_double(root.value) << ',' << static_cast<int>(root.flag) << ','
             << imp.skipped << ',' << imp.forward_ok << ',' << imp.converse_ok << '\n';
        }
      });
    }
    if (*chi) {
      std::optional<std::size_t> ell;
      if (c.ell != "auto") ell = static_cast<std::size_t>(std::stoul(c.ell));
      return emit(c.out, [&](std::ostream& os) {
        os << "trial,ell,chi_trunc,chi_full,gap,r\n";
        for (std::uint64_t t = 0; t < c.trials; ++t) {
          const auto m = sample_matrix(dist, c.n, c.n, substream_seed(c.seed, t, StreamRole::Matrix));
          const Matrix mstar = without_last_row(m.entries);
          const Vector y = last_row(m.entries);
          std::string r = "na";
          if (c.n >= 16) {
            EventParams ep;
            ep.evaluate_lcd = false;
            r = regularity_profile(m.entries, ep).r() ? "1" : "0";
          }
          try {
            const auto ctx = CorrectionContext::from_matrix(mstar, ell);
            os << t << ',' << ctx.ell() << ',' << format_double(chi_trunc(ctx, y)) << ','
               << format_double(chi_full(ctx, y)) << ',' << format_double(truncation_gap(ctx, y))
               << ',' << r << '\n';
          } catch (const DegenerateError&) {
            os << t << ",,nan,nan,nan," << r << '\n';
          }
        }
      });
    }
    if (*events) {
      if (c.n < 16) throw InputError("events need n >= 16");
      EventParams ep;
      ep.evaluate_lcd = !no_lcd;
      std::vector<EventProfile> profiles;
      profiles.reserve(c.trials);
      for (std::uint64_t t = 0; t < c.trials; ++t) {
        const auto m = sample_matrix(dist, c.n, c.n, substream_seed(c.seed, t, StreamRole::Matrix));
        profiles.push_back(regularity_profile(m.entries, ep));
      }
      return emit(c.out, [&](std::ostream& os) {
        if (summary_only) write_event_summary_csv(os, profiles);
        else write_profile_rows_csv(os, profiles);
      });
    }
    if (*smallball) {
      const auto s = reference_summary(dist, c.n, c.seed, 1);
      const auto r = small_ball_test(*s.kernel_vector, dist, parse_list(eps_list), setup);
      std::cerr << "c_fit=" << format_double(r.c_fit) << " pass=" << r.pass << '\n';
      const int code = emit(c.out, [&](std::ostream& os) { write_verdict_csv(os, r.cells); });
      return code != kExitOk ? code : (r.pass ? kExitOk : kExitFailure);
    }
    if (*decouple) {
      const auto s = reference_summary(dist, c.n, c.seed, 1);
      const auto r = decoupling_test(*s.kernel_vector, s.smallest_vectors.front(), dec_eps,
                                     parse_list(t_list), dist, setup, waive);
      std::cerr << "c_fit=" << format_double(r.c_fit) << " decreasing=" << r.strictly_decreasing
                << " pass=" << r.pass << '\n';
      const int code = emit(c.out, [&](std::ostream& os) { write_verdict_csv(os, r.cells); });
      return code != kExitOk ? code : (r.pass ? kExitOk : kExitFailure);
    }
    if (*negdep) {
      const auto ks = parse_index_list(k_list);
      const std::size_t kmax = ks.empty() ? 1 : *std::max_element(ks.begin(), ks.end());
      const auto s = reference_summary(dist, c.n, c.seed, kmax);
      Matrix w(static_cast<Eigen::Index>(c.n), static_cast<Eigen::Index>(kmax));
      for (std::size_t j = 0; j < kmax; ++j) w.col(static_cast<Eigen::Index>(j)) = s.smallest_vectors[j];
      const auto r = negative_dependence_sweep(*s.kernel_vector, w, nd_eps, c_small, ks, dist, setup);
      std::vector<TestVerdict> cells;
      for (const auto& cell : r.cells) cells.push_back(cell.verdict);
      std::cerr << "decreasing=" << r.strictly_decreasing << '\n';
      const int code = emit(c.out, [&](std::ostream& os) {
        write_verdict_csv(os, cells);
      });
      return code != kExitOk ? code : (r.strictly_decreasing ? kExitOk : kExitFailure);
    }
    if (*sigtails) {
      const auto r = sigma_tail_tests(dist, c.n, parse_index_list(st_k), parse_list(st_t), c_lower, setup);
      std::vector<TestVerdict> cells = r.lower;
      cells.insert(cells.end(), r.upper.begin(), r.upper.end());
      std::cerr << "lower_monotone=" << r.lower_monotone << " upper_monotone=" << r.upper_monotone
                << " skipped=" << r.skipped << '\n';
      const int code = emit(c.out, [&](std::ostream& os) { write_verdict_csv(os, cells); });
      const bool ok = r.lower_monotone && r.upper_monotone;
      return code != kExitOk ? code : (ok ? kExitOk : kExitFailure);
    }
    if (*lindeberg) {
      const auto s = reference_summary(dist, c.n, c.seed, 1);
      std::vector<Vector> us{*s.kernel_vector,
                             Vector::Ones(static_cast<Eigen::Index>(c.n)) /
                                 std::sqrt(static_cast<double>(c.n))};
      const auto cells = lindeberg_gap_test(us, dist, bump_test_function(scale), setup);
      bool ok = true;
      return emit(c.out, [&](std::ostream& os) {
        os << "vector,mean_gap,halfwidth,cube_sum,bound,outcome\n";
        const char* names[] = {"kernel", "flat"};
        for (std::size_t i = 0; i < cells.size(); ++i) {
          ok = ok && cells[i].verdict.pass();
          os << names[i] << ',' << format_double(cells[i].mean_gap) << ','
             << format_double(cells[i].halfwidth) << ',' << format_double(cells[i].cube_sum) << ','
             << format_double(cells[i].verdict.bound_value) << ','
             << to_string(cells[i].verdict.outcome) << '\n';
        }
      }) != kExitOk ? kExitUnwritable : (ok ? kExitOk : kExitFailure);
    }
    if (*lcdcmd) {
      LcdQuery q;
      q.v = builtin_vector(vector_spec);
      q.alpha = alpha;
      q.gamma = gamma;
      q.theta_cap = cap;
      const auto r = lcd(q, effective_workers(c.workers));
      return emit(c.out, [&](std::ostream& os) {
        os << "kind,theta,certificate_gap,evaluations,uncertified,scanned_to,empty_scan\n"
           << (r.found() ? "found" : "exceeds_cap") << ',' << format_double(r.theta) << ','
           << format_double(r.certificate_gap) << ',' << r.evaluations << ',' << r.uncertified
           << ',' << format_double(r.scanned_to) << ',' << r.empty_scan << '\n';
      });
    }
    if (*bumpcmd) {
      const auto t = BumpTable::build(grid_max, step);
      return emit(c.out, [&](std::ostream& os) {
        os << "x,psi,bound\n";
        for (std::size_t i = 0; i < t.grid.size(); ++i) {
          const double x = t.grid[i];
          os << format_double(x) << ',' << format_double(t.psi_values[i]) << ','
             << format_double(std::exp(-t.decay_constant_fit * std::sqrt(std::abs(x) + 1.0)))
             << '\n';
        }
      });
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
