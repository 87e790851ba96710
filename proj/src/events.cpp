#include "lsvlab/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "lsvlab/bump.hpp"
#include "lsvlab/corrector.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/parallel.hpp"
#include "lsvlab/rng.hpp"
#include "lsvlab/spectra.hpp"

namespace lsv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(const Vector& v, const char* where) {
  if (v.size() == 0 || !v.allFinite()) {
    throw InputError(std::string(where) + ": vector must be non-empty and finite");
  }
  if (std::abs(v.norm() - 1.0) > 1e-9) throw InputError(std::string(where) + ": vector must be unit");
}

void require_trials(const TrialSetup& s, const char* where) {
  if (s.trials == 0) throw InputError(std::string(where) + ": trials must be positive");
}

template <class T>
void add_into(std::vector<T>& acc, const std::vector<T>& block) {
  if (acc.size() < block.size()) acc.resize(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) acc[i] += block[i];
}

// Powered cells only; vacuous (false) with fewer than two.
bool strictly_decreasing(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

bool non_increasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- profiles

double loglog_level(std::size_t n) {
  const double log_n = std::log(static_cast<double>(n));
  return log_n > 1.0 ? std::max(1.0, std::log(log_n)) : 1.0;
}

std::size_t loglog_square_index(std::size_t n) {
  const double l = loglog_level(n);
  const auto m = static_cast<std::size_t>(std::floor(l * l));
  return std::clamp<std::size_t>(m, 1, n > 1 ? n - 1 : 1);
}

double EventProfile::r4_partial_sum() const {
  const std::size_t m = loglog_square_index(witnesses.n);
  double s = 0.0;
  for (std::size_t i = 0; i < m && i < witnesses.projections.size(); ++i) {
    s += witnesses.projections[i] * witnesses.projections[i];
  }
  return s;
}

bool EventProfile::e_r(double r) const {
  const auto& w = witnesses;
  const double root_n = std::sqrt(static_cast<double>(w.n));
  for (std::size_t k = 1; k < w.n; ++k) {
    const double kd = static_cast<double>(k);
    if (std::abs(w.projections[k - 1]) > std::max(std::pow(kd, 0.125), r)) return false;
    if (kd >= r && w.sigma_from_bottom[k - 1] < std::pow(kd, 0.75) / root_n) return false;
  }
  return true;
}

EventProfile EventProfile::recompute(EventWitnesses w, const EventParams& params) {
  EventProfile p;
  p.params = params;
  const std::size_t n = w.n;
  if (n < 16 || w.sigma_from_bottom.size() != n - 1 || w.projections.size() != n - 1) {
    throw InputError("EventProfile: witnesses do not match n");
  }
  const double nd = static_cast<double>(n);
  const double root_n = std::sqrt(nd);
  const double log_n = std::log(nd);
  const double level = loglog_level(n);
  auto sigma = [&w](std::size_t k) { return w.sigma_from_bottom[k - 1]; };

  p.r1 = sigma(1) >= std::pow(log_n, -3.0) / root_n;

  bool projections_ok = true;
  bool sigma_floor_ok = true;
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    if (std::abs(w.projections[k - 1]) > std::max(std::pow(kd, 0.125), level)) {
      projections_ok = false;
    }
    if (kd >= level && sigma(k) < std::pow(kd, 0.75) / root_n) sigma_floor_ok = false;
  }
  p.r2 = projections_ok && sigma_floor_ok;

  const std::size_t m = loglog_square_index(n);
  p.r3 = sigma(m) <= level * level * level / root_n;

  double partial = 0.0;
  for (std::size_t i = 1; i <= m; ++i) partial += w.projections[i - 1] * w.projections[i - 1];
  p.r4 = partial >= level;

  const double flat_threshold = params.flat_constant * std::pow(nd, -params.flat_exponent);
  p.e_flat = !w.degenerate_kernel && !w.flat_norms.empty() &&
             std::all_of(w.flat_norms.begin(), w.flat_norms.end(),
                         [flat_threshold](double x) { return x < flat_threshold; });
  p.e_lcd = !w.degenerate_kernel && w.lcd.has_value() && !w.lcd->found() && !w.lcd->empty_scan;

  const std::size_t s_index =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(std::sqrt(log_n))), 1, n - 1);
  const bool upper_pair = p.r3 && sigma(s_index) <= log_n / root_n;
  p.e_star = p.r1 && sigma_floor_ok && upper_pair && p.e_lcd && p.e_flat;
  p.skipped = w.degenerate_kernel;
  p.witnesses = std::move(w);
  return p;
}

EventProfile regularity_profile(const Matrix& m, const EventParams& params) {
  if (m.rows() != m.cols()) throw InputError("regularity_profile: matrix must be square");
  if (m.rows() < 16) throw InputError("regularity_profile: n must be >= 16");
  if (!m.allFinite()) throw InputError("regularity_profile: non-finite entries");
  const auto n = static_cast<std::size_t>(m.rows());
  const Matrix mstar = without_last_row(m);
  const Vector x = last_row(m);

  const SpectralSummary s = smallest_singular_pairs(mstar, n - 1);
  EventWitnesses w;
  w.n = n;
  w.sigma_from_bottom.resize(n - 1);
  w.projections.resize(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    w.sigma_from_bottom[k - 1] = s.sigma_of_smallest(k - 1);
    w.projections[k - 1] = s.smallest_vectors[k - 1].dot(x);
  }
  w.degenerate_kernel = s.sigma.back() <= kRankTolerance * mstar.norm();

  if (!w.degenerate_kernel) {
    const Vector& kernel = *s.kernel_vector;
    const std::size_t ell = std::min(schedule(n).ell, n - 1);
    w.flat_norms.push_back(kernel.lpNorm<Eigen::Infinity>());
    for (std::size_t i = 0; i < ell; ++i) {
      w.flat_norms.push_back(s.smallest_vectors[i].lpNorm<Eigen::Infinity>());
    }
    if (params.evaluate_lcd) {
      LcdQuery q;
      q.v = kernel / kernel.norm();
      q.alpha = params.lcd_alpha;
      q.gamma = params.lcd_gamma;
      q.theta_cap = params.lcd_cap;
      try {
        w.lcd = lcd(q);
      } catch (const LcdBudgetError&) {
        w.lcd.reset();
      }
    }
  }
  return EventProfile::recompute(std::move(w), params);
}

// ---------------------------------------------------------------- verdicts

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    default:
      return "underpowered";
  }
}

TestVerdict proportion_verdict(std::string label, std::uint64_t count, std::uint64_t trials,
                               double bound, double statistic) {
  const Proportion p = Proportion::of(count, trials);
  TestVerdict v;
  v.label = std::move(label);
  v.count = count;
  v.trials = trials;
  v.estimate = p.estimate;
  v.ci_low = p.ci.low;
  v.ci_high = p.ci.high;
  v.bound_value = bound;
  v.statistic = statistic;
  if (static_cast<double>(trials) * p.estimate < kMinExpectedCount) {
    v.outcome = Outcome::Underpowered;
  } else {
    v.outcome = p.ci.low <= bound ? Outcome::Pass : Outcome::Fail;
  }
  return v;
}

// ---------------------------------------------------------------- small ball

SmallBallReport small_ball_test(const Vector& v, const EntryDistribution& dist,
                                const std::vector<double>& eps_grid, const TrialSetup& setup) {
  require_unit(v, "small_ball_test");
  require_trials(setup, "small_ball_test");
  if (eps_grid.empty()) throw InputError("small_ball_test: empty epsilon grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))) {
      throw InputError("small_ball_test: epsilons must be positive and ascending");
    }
  }
  const auto n = static_cast<std::size_t>(v.size());
  using Tally = std::vector<std::uint64_t>;
  const Tally counts = run_trials(
      setup.trials, setup.workers, Tally(eps_grid.size(), 0),
      [&](std::uint64_t t, Tally& tally) {
        Rng rng(substream_seed(setup.seed, t, StreamRole::Vector));
        const double s = std::abs(v.dot(sample_vector(dist, n, rng)));
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
          if (s <= eps_grid[i]) ++tally[i];
        }
      },
      add_into<std::uint64_t>);

  SmallBallReport report;
  const double top = eps_grid.back();
  report.c_fit = Proportion::of(counts.back(), setup.trials).ci.high / top;
  report.pass = true;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    auto cell = proportion_verdict("smallball", counts[i], setup.trials, report.c_fit * eps,
                                   static_cast<double>(counts[i]) /
                                       static_cast<double>(setup.trials) / eps);
    cell.param_a = eps;
    if (cell.outcome == Outcome::Fail) report.pass = false;
    report.cells.push_back(cell);
  }
  return report;
}

// ---------------------------------------------------------------- decoupling

DecouplingReport decoupling_test(const Vector& u, const Vector& w, double eps,
                                 const std::vector<double>& t_grid,
                                 const EntryDistribution& dist, const TrialSetup& setup,
                                 bool waive_orthogonality) {
  require_unit(u, "decoupling_test");
  require_unit(w, "decoupling_test");
  require_trials(setup, "decoupling_test");
  if (u.size() != w.size()) throw InputError("decoupling_test: length mismatch");
  if (!(eps > 0.0)) throw InputError("decoupling_test: eps must be positive (or infinite)");
  if (t_grid.empty()) throw InputError("decoupling_test: empty t grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw InputError("decoupling_test: t grid must ascend");
  }

  DecouplingReport report;
  report.inner_uw = u.dot(w);
  report.orthogonal = std::abs(report.inner_uw) <= 1e-10;
  if (!report.orthogonal && !waive_orthogonality) {
    throw InputError("decoupling_test: u and w are not orthogonal (|<u,w>| = " +
                     std::to_string(std::abs(report.inner_uw)) + ")");
  }

  const auto n = static_cast<std::size_t>(u.size());
  const std::size_t m = t_grid.size();
  // Layout: [joint per t | tail per t | small ball].
  using Tally = std::vector<std::uint64_t>;
  const Tally counts = run_trials(
      setup.trials, setup.workers, Tally(2 * m + 1, 0),
      [&](std::uint64_t t, Tally& tally) {
        Rng rng(substream_seed(setup.seed, t, StreamRole::Vector));
        const Vector y = sample_vector(dist, n, rng);
        const bool small = std::isinf(eps) || std::abs(u.dot(y)) <= eps;
        const double b = w.dot(y);
        if (small) ++tally[2 * m];
        for (std::size_t i = 0; i < m; ++i) {
          if (b > t_grid[i]) {
            ++tally[m + i];
            if (small) ++tally[i];
          }
        }
      },
      add_into<std::uint64_t>);

  const double eps_factor = std::isinf(eps) ? 1.0 : eps;
  auto profile = [&](double t) { return eps_factor * std::exp(-t * t / 4.0); };
  report.small_ball = Proportion::of(counts[2 * m], setup.trials);
  report.c_fit = Proportion::of(counts[0], setup.trials).ci.high / profile(t_grid[0]);
  report.pass = true;
  std::vector<double> powered;
  for (std::size_t i = 0; i < m; ++i) {
    report.tails.push_back(Proportion::of(counts[m + i], setup.trials));
    const double estimate = static_cast<double>(counts[i]) / static_cast<double>(setup.trials);
    auto cell = proportion_verdict("decouple", counts[i], setup.trials,
                                   report.c_fit * profile(t_grid[i]),
                                   estimate / profile(t_grid[i]));
    cell.param_a = t_grid[i];
    cell.param_b = eps;
    if (cell.outcome == Outcome::Fail) report.pass = false;
    if (cell.powered()) powered.push_back(cell.estimate);
    report.cells.push_back(cell);
  }
  report.strictly_decreasing = strictly_decreasing(powered);
  report.pass = report.pass && report.strictly_decreasing;
  return report;
}

// ---------------------------------------------------------------- negative dependence

namespace {

void check_negdep_inputs(const Vector& u, const Matrix& w) {
  require_unit(u, "negative_dependence_test");
  if (w.rows() != u.size() || w.cols() < 1) {
    throw InputError("negative_dependence_test: W must be n x k with k >= 1");
  }
  const Matrix gram = w.transpose() * w;
  const double off = (gram - Matrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
  if (off > 1e-10) throw InputError("negative_dependence_test: W is not orthonormal");
  if ((w.transpose() * u).cwiseAbs().maxCoeff() > 1e-10) {
    throw InputError("negative_dependence_test: W is not orthogonal to u");
  }
}

NegDepCell make_negdep_cell(const Vector& u, const Matrix& w, std::size_t k, double eps,
                            std::uint64_t count, std::uint64_t trials) {
  NegDepCell cell;
  const double nd = static_cast<double>(u.size());
  double value = static_cast<double>(k) * u.lpNorm<Eigen::Infinity>();
  for (std::size_t j = 0; j < k; ++j) {
    value += w.col(static_cast<Eigen::Index>(j)).lpNorm<Eigen::Infinity>();
  }
  cell.precondition_value = value;
  cell.precondition_holds = value <= std::pow(std::log(nd), -3.0);
  const double estimate = static_cast<double>(count) / static_cast<double>(trials);
  cell.verdict = proportion_verdict("negdep", count, trials, kInf, estimate / eps);
  cell.verdict.param_a = static_cast<double>(k);
  cell.verdict.param_b = eps;
  return cell;
}

}  // namespace

NegDepReport negative_dependence_sweep(const Vector& u, const Matrix& w_all, double eps,
                                       double c_small, const std::vector<std::size_t>& k_grid,
                                       const EntryDistribution& dist, const TrialSetup& setup) {
  check_negdep_inputs(u, w_all);
  require_trials(setup, "negative_dependence_test");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("negative_dependence_test: bad eps");
  if (!(c_small > 0.0)) throw InputError("negative_dependence_test: c_small must be positive");
  if (k_grid.empty()) throw InputError("negative_dependence_test: empty k grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (k_grid[i] < 1 || k_grid[i] > static_cast<std::size_t>(w_all.cols()) ||
        (i > 0 && k_grid[i] <= k_grid[i - 1])) {
      throw InputError("negative_dependence_test: k grid must ascend within [1, cols(W)]");
    }
  }

  const auto n = static_cast<std::size_t>(u.size());
  const std::size_t k_max = k_grid.back();
  const Matrix wt = w_all.leftCols(static_cast<Eigen::Index>(k_max)).transpose();
  using Tally = std::vector<std::uint64_t>;
  const Tally counts = run_trials(
      setup.trials, setup.workers, Tally(k_grid.size(), 0),
      [&](std::uint64_t t, Tally& tally) {
        Rng rng(substream_seed(setup.seed, t, StreamRole::Vector));
        const Vector y = sample_vector(dist, n, rng);
        if (std::abs(u.dot(y)) > eps) return;
        const Vector proj = wt * y;
        double partial = 0.0;
        std::size_t next = 0;
        for (std::size_t j = 0; j < k_max && next < k_grid.size(); ++j) {
          partial += proj[static_cast<Eigen::Index>(j)] * proj[static_cast<Eigen::Index>(j)];
          if (j + 1 == k_grid[next]) {
            if (std::isinf(c_small) || partial <= c_small * static_cast<double>(j + 1)) {
              ++tally[next];
            }
            ++next;
          }
        }
      },
      add_into<std::uint64_t>);

  NegDepReport report;
  std::vector<double> powered;
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    report.cells.push_back(make_negdep_cell(u, w_all, k_grid[i], eps, counts[i], setup.trials));
    if (report.cells.back().verdict.powered()) {
      powered.push_back(report.cells.back().verdict.statistic);
    }
  }
  report.strictly_decreasing = strictly_decreasing(powered);
  return report;
}

NegDepCell negative_dependence_test(const Vector& u, const Matrix& w, double eps, double c_small,
                                    const EntryDistribution& dist, const TrialSetup& setup) {
  const auto k = static_cast<std::size_t>(w.cols());
  return negative_dependence_sweep(u, w, eps, c_small, {k}, dist, setup).cells.front();
}

// ---------------------------------------------------------------- sigma tails

SigmaTailReport sigma_tail_tests(const EntryDistribution& dist, std::size_t n,
                                 const std::vector<std::size_t>& k_grid,
                                 const std::vector<double>& t_grid, double c_lower,
                                 const TrialSetup& setup) {
  require_trials(setup, "sigma_tail_tests");
  if (n < 2) throw InputError("sigma_tail_tests: n must be >= 2");
  if (k_grid.empty() || t_grid.empty()) throw InputError("sigma_tail_tests: empty grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (k_grid[i] < 1 || k_grid[i] > n - 1 || (i > 0 && k_grid[i] <= k_grid[i - 1])) {
      throw InputError("sigma_tail_tests: k grid must ascend within [1, n-1]");
    }
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InputError("sigma_tail_tests: t grid must be positive and ascending");
    }
  }
  if (!(c_lower > 0.0)) throw InputError("sigma_tail_tests: c must be positive");

  const double root_n = std::sqrt(static_cast<double>(n));
  const std::size_t nk = k_grid.size();
  const std::size_t nt = t_grid.size();
  // Layout: [lower per k | upper per (k, t) | rank-deficient samples].
  using Tally = std::vector<std::uint64_t>;
  const Tally counts = run_trials(
      setup.trials, setup.workers, Tally(nk + nk * nt + 1, 0),
      [&](std::uint64_t t, Tally& tally) {
        const MatrixSample mstar =
            sample_matrix(dist, n - 1, n, substream_seed(setup.seed, t, StreamRole::Matrix));
        const std::vector<double> s = singular_values(mstar.entries);
        if (s.back() <= kRankTolerance * mstar.entries.norm()) ++tally[nk + nk * nt];
        for (std::size_t i = 0; i < nk; ++i) {
          const double kd = static_cast<double>(k_grid[i]);
          const double sigma = s[s.size() - k_grid[i]];  // sigma_{n-k}
          if (sigma < c_lower * kd / root_n) ++tally[i];
          for (std::size_t j = 0; j < nt; ++j) {
            if (sigma >= t_grid[j] * kd / root_n) ++tally[nk + i * nt + j];
          }
        }
      },
      add_into<std::uint64_t>);

  SigmaTailReport report;
  report.skipped = counts[nk + nk * nt];
  std::vector<double> lower_powered;
  for (std::size_t i = 0; i < nk; ++i) {
    auto cell = proportion_verdict("sigtail_lower", counts[i], setup.trials, kInf,
                                   static_cast<double>(counts[i]) /
                                       static_cast<double>(setup.trials));
    cell.param_a = static_cast<double>(k_grid[i]);
    cell.param_b = c_lower;
    if (cell.powered()) lower_powered.push_back(cell.estimate);
    report.lower.push_back(cell);
  }
  report.lower_monotone = non_increasing(lower_powered);
  report.upper_monotone = true;
  for (std::size_t i = 0; i < nk; ++i) {
    std::vector<double> powered;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::uint64_t c = counts[nk + i * nt + j];
      auto cell = proportion_verdict("sigtail_upper", c, setup.trials, kInf,
                                     static_cast<double>(c) / static_cast<double>(setup.trials));
      cell.param_a = static_cast<double>(k_grid[i]);
      cell.param_b = t_grid[j];
      if (cell.powered()) powered.push_back(cell.estimate);
      report.upper.push_back(cell);
    }
    if (!non_increasing(powered)) report.upper_monotone = false;
  }
  return report;
}

// ---------------------------------------------------------------- Lindeberg

ScalarTestFunction bump_test_function(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("bump_test_function: bad scale");
  static const auto evaluator = std::make_shared<const BumpEvaluator>(512);
  static const double psi_d3 = psi_third_derivative_bound();
  ScalarTestFunction f;
  f.name = "psi(x/" + std::to_string(scale) + ")";
  f.f = [scale, ev = evaluator](double s) { return (*ev)(s / scale); };
  f.third_derivative_bound = psi_d3 / (scale * scale * scale);
  return f;
}

ScalarTestFunction linear_test_function(double slope, double offset) {
  ScalarTestFunction f;
  f.name = "linear";
  f.f = [slope, offset](double s) { return slope * s + offset; };
  f.third_derivative_bound = 0.0;
  return f;
}

std::vector<LindebergCell> lindeberg_gap_test(const std::vector<Vector>& u_set,
                                              const EntryDistribution& dist,
                                              const ScalarTestFunction& f,
                                              const TrialSetup& setup) {
  if (!f.third_derivative_bound) {
    throw UnsupportedError("lindeberg_gap_test: test function '" + f.name +
                           "' has no third-derivative bound");
  }
  require_trials(setup, "lindeberg_gap_test");
  if (u_set.empty()) throw InputError("lindeberg_gap_test: empty vector set");
  const auto n = static_cast<std::size_t>(u_set.front().size());
  for (const auto& u : u_set) {
    if (static_cast<std::size_t>(u.size()) != n || n == 0 || !u.allFinite()) {
      throw InputError("lindeberg_gap_test: vectors must share a positive length");
    }
  }

  using Tally = std::vector<RunningMoments>;
  const Tally moments = run_trials(
      setup.trials, setup.workers, Tally(u_set.size()),
      [&](std::uint64_t t, Tally& tally) {
        Rng xr(substream_seed(setup.seed, t, StreamRole::Vector));
        Rng zr(substream_seed(setup.seed, t, StreamRole::Gaussian));
        const Vector x = sample_vector(dist, n, xr);
        Vector z(static_cast<Eigen::Index>(n));
        for (auto& e : z) e = zr.normal();
        for (std::size_t i = 0; i < u_set.size(); ++i) {
          tally[i].add(f.f(u_set[i].dot(x)) - f.f(u_set[i].dot(z)));
        }
      },
      [](Tally& acc, const Tally& block) {
        for (std::size_t i = 0; i < block.size(); ++i) acc[i].merge(block[i]);
      });

  const double moment_sum = dist.abs_moment(3.0) + kGaussianThirdAbsMoment;
  std::vector<LindebergCell> cells;
  for (std::size_t i = 0; i < u_set.size(); ++i) {
    LindebergCell cell;
    cell.cube_sum = u_set[i].cwiseAbs().array().cube().sum();
    cell.mean_gap = moments[i].mean();
    cell.halfwidth = moments[i].mean_halfwidth();
    const double bound = moment_sum * *f.third_derivative_bound * cell.cube_sum;
    TestVerdict& v = cell.verdict;
    v.label = "lindeberg";
    v.param_a = static_cast<double>(i);
    v.statistic = std::abs(cell.mean_gap);
    v.bound_value = bound;
    v.trials = setup.trials;
    v.estimate = cell.mean_gap;
    v.ci_low = cell.mean_gap - cell.halfwidth;
    v.ci_high = cell.mean_gap + cell.halfwidth;
    v.outcome = v.statistic <= bound + 3.0 * cell.halfwidth ? Outcome::Pass : Outcome::Fail;
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace lsv
