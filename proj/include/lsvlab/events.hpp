#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsvlab/ensemble.hpp"
#include "lsvlab/linalg.hpp"
#include "lsvlab/stats.hpp"
#include "lsvlab/structure.hpp"

namespace lsv {

// ---------------------------------------------------------------- profiles

/// Knobs for the events whose constants are left open: the LCD scan that
/// stands in for E_lcd and the flatness threshold C n^{-c}.
struct EventParams {
  double lcd_alpha = 0.01;
  double lcd_gamma = 0.5;
  double lcd_cap = 1e4;
  bool evaluate_lcd = true;
  double flat_constant = 1.0;
  double flat_exponent = 0.25;
};

/// Scalars from which every indicator is recomputed.
struct EventWitnesses {
  std::size_t n = 0;
  /// sigma_from_bottom[k-1] = sigma_{n-k}(M*), k = 1..n-1.
  std::vector<double> sigma_from_bottom;
  /// projections[k-1] = <v_{n-k}, X>, k = 1..n-1.
  std::vector<double> projections;
  /// ||v||_inf, ||v_{n-1}||_inf, ..., ||v_{n-ell}||_inf; empty if degenerate.
  std::vector<double> flat_norms;
  /// Outcome of the capped LCD scan of the kernel vector.
  std::optional<LcdResult> lcd;
  bool degenerate_kernel = false;
};

/// max(1, ln ln n).
double loglog_level(std::size_t n);
/// floor(loglog_level(n)^2) clamped to [1, n-1].
std::size_t loglog_square_index(std::size_t n);

struct EventProfile {
  bool skipped = false;
  bool r1 = false;
  bool r2 = false;
  bool r3 = false;
  bool r4 = false;
  bool e_flat = false;
  bool e_lcd = false;
  /// E_lcd is judged by a scan capped at lcd_cap, not the true LCD.
  bool e_lcd_approximate = true;
  bool e_star = false;
  EventWitnesses witnesses;
  EventParams params;

  bool r() const { return r1 && r2 && r3 && r4; }
  /// E_r: |<v_{n-k},X>| <= max(k^{1/8}, r) for all k, and
  /// sigma_{n-k} >= k^{3/4} n^{-1/2} for all k >= r.
  bool e_r(double r) const;
  /// Witness-level quantities.
  double r4_partial_sum() const;

  /// Indicators from witnesses alone.
  static EventProfile recompute(EventWitnesses w, const EventParams& params);
};

/// Split M (n x n, n >= 16) into M* and X and evaluate every event. A
/// rank-deficient M* sets skipped; spectral events are still filled in and
/// E_lcd / E_flat are false.
EventProfile regularity_profile(const Matrix& m, const EventParams& params = {});

// ---------------------------------------------------------------- verdicts

enum class Outcome { Pass, Fail, Underpowered };

std::string to_string(Outcome o);

/// Expected successes below which a cell gets no verdict.
inline constexpr double kMinExpectedCount = 10.0;

struct TestVerdict {
  std::string label;
  double param_a = 0.0;   // epsilon, k or t depending on the test
  double param_b = 0.0;
  double statistic = 0.0;
  double bound_value = 0.0;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Outcome outcome = Outcome::Underpowered;

  bool pass() const { return outcome == Outcome::Pass; }
  bool powered() const { return outcome != Outcome::Underpowered; }
};

/// Proportion cell; Underpowered when trials * estimate < kMinExpectedCount,
/// otherwise Pass iff ci_low <= bound.
TestVerdict proportion_verdict(std::string label, std::uint64_t count, std::uint64_t trials,
                               double bound, double statistic);

struct TrialSetup {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// ---------------------------------------------------------------- small ball

struct SmallBallReport {
  std::vector<TestVerdict> cells;  // one per epsilon
  double c_fit = 0.0;              // ci_high / eps at the largest epsilon
  bool pass = false;               // every powered cell passes
};

/// P(|<v,Y>| <= eps) per eps on one sample. c_fit is calibrated at the
/// largest eps; a cell passes iff ci_low <= c_fit * eps.
SmallBallReport small_ball_test(const Vector& v, const EntryDistribution& dist,
                                const std::vector<double>& eps_grid, const TrialSetup& setup);

// ---------------------------------------------------------------- decoupling

struct DecouplingReport {
  std::vector<TestVerdict> cells;  // one per t
  Proportion small_ball;           // P(|<u,Y>| <= eps)
  std::vector<Proportion> tails;   // P(<w,Y> > t)
  double inner_uw = 0.0;
  bool orthogonal = true;
  double c_fit = 0.0;
  /// Estimates strictly decrease along the powered part of the t grid.
  bool strictly_decreasing = false;
  bool pass = false;
};

/// P(|<u,Y>| <= eps and <w,Y> > t) for each t on one sample; eps may be
/// +infinity. Cells are compared with c_fit * eps * exp(-t^2/4), c_fit
/// calibrated at the first t. Unless waive_orthogonality, |<u,w>| > 1e-10
/// throws InputError.
DecouplingReport decoupling_test(const Vector& u, const Vector& w, double eps,
                                 const std::vector<double>& t_grid,
                                 const EntryDistribution& dist, const TrialSetup& setup,
                                 bool waive_orthogonality = false);

// ---------------------------------------------------------------- negative dependence

struct NegDepCell {
  TestVerdict verdict;
  double precondition_value = 0.0;  // k ||u||_inf + sum ||w_i||_inf
  bool precondition_holds = false;  // value <= (ln n)^{-3}
};

/// P(|<u,Y>| <= eps and sum_j <w_j,Y>^2 <= c_small k) with W = the first k
/// columns of w_all. c_small may be +infinity. Columns must be orthonormal
/// and orthogonal to u within 1e-10.
NegDepCell negative_dependence_test(const Vector& u, const Matrix& w, double eps, double c_small,
                                    const EntryDistribution& dist, const TrialSetup& setup);

struct NegDepReport {
  std::vector<NegDepCell> cells;  // one per k
  /// estimate / eps strictly decreases along the powered k cells.
  bool strictly_decreasing = false;
};

/// Same sample for every k in k_grid (ascending); w_all needs at least
/// max(k_grid) columns.
NegDepReport negative_dependence_sweep(const Vector& u, const Matrix& w_all, double eps,
                                       double c_small, const std::vector<std::size_t>& k_grid,
                                       const EntryDistribution& dist, const TrialSetup& setup);

// ---------------------------------------------------------------- sigma tails

struct SigmaTailReport {
  /// P(sigma_{n-k}(M*) < c k n^{-1/2}) per k.
  std::vector<TestVerdict> lower;
  /// P(sigma_{n-k}(M*) >= t k n^{-1/2}) per (k, t), k-major.
  std::vector<TestVerdict> upper;
  /// Powered lower-tail estimates non-increasing in k.
  bool lower_monotone = false;
  /// For every k, powered upper-tail estimates non-increasing in t.
  bool upper_monotone = false;
  std::uint64_t skipped = 0;
};

/// M* of shape (n-1) x n per trial. k_grid must lie in [1, n-1].
SigmaTailReport sigma_tail_tests(const EntryDistribution& dist, std::size_t n,
                                 const std::vector<std::size_t>& k_grid,
                                 const std::vector<double>& t_grid, double c_lower,
                                 const TrialSetup& setup);

// ---------------------------------------------------------------- Lindeberg

/// f: R -> R with an optional bound on sup |f'''|.
struct ScalarTestFunction {
  std::string name;
  std::function<double(double)> f;
  std::optional<double> third_derivative_bound;
};

/// s -> psi(s / scale), with sup |f'''| <= (2 pi)^3 int |t|^3 psihat / scale^3.
ScalarTestFunction bump_test_function(double scale = 4.0);
/// s -> slope * s + offset; third derivative 0.
ScalarTestFunction linear_test_function(double slope = 1.0, double offset = 0.0);

/// E|Z|^3 for Z ~ N(0, 1).
inline constexpr double kGaussianThirdAbsMoment = 1.5957691216057308;

struct LindebergCell {
  TestVerdict verdict;      // statistic = |mean gap|, bound_value = exchange bound
  double mean_gap = 0.0;    // E f(<u,X>) - E f(<u,Z>)
  double halfwidth = 0.0;   // 99% half-width of the mean gap
  double cube_sum = 0.0;    // sum_i |u_i|^3
};

/// Paired Monte Carlo of f(<u,X>) - f(<u,Z>) with X ~ dist^n and Z Gaussian,
/// one cell per u. Pass iff |mean gap| <= (E|xi|^3 + E|Z|^3) sup|f'''|
/// sum |u_i|^3 + 3 * halfwidth. Throws UnsupportedError if f carries no
/// third-derivative bound.
std::vector<LindebergCell> lindeberg_gap_test(const std::vector<Vector>& u_set,
                                              const EntryDistribution& dist,
                                              const ScalarTestFunction& f,
                                              const TrialSetup& setup);

}  // namespace lsv
