#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lsvlab/ensemble.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/linalg.hpp"

namespace lsv {

/// (sum_i min_z |v_i - z|^2)^{1/2}.
double torus_norm(const Vector& v);

/// dist(theta v, Z^n) - min(gamma ||theta v||, sqrt(alpha n)); negative
/// exactly when theta satisfies the LCD inequality.
double lcd_margin(const Vector& v, double theta, double alpha, double gamma);

struct LcdQuery {
  Vector v;
  double alpha = 1.0;
  double gamma = 0.5;
  double theta_cap = 10.0;
  /// Coarse scan step; 0 selects gamma / 4.
  double grid_step = 0.0;
  /// Width at which a sign change is accepted as the infimum.
  double resolution = 1e-9;
  /// Maximum number of margin evaluations before giving up.
  std::uint64_t max_evaluations = 200'000'000;

  /// Throws InputError unless ||v|| = 1 within 1e-12, alpha > 0,
  /// 0 < gamma < 1, theta_cap >= 0 and 0 <= grid_step <= gamma / 4.
  void validate() const;
  double step() const { return grid_step > 0.0 ? grid_step : gamma / 4.0; }
};

struct LcdResult {
  enum class Kind { Found, ExceedsCap };
  Kind kind = Kind::ExceedsCap;
  /// The accepted theta (margin < 0 there); NaN for ExceedsCap.
  double theta = std::numeric_limits<double>::quiet_NaN();
  /// Smallest margin seen on the part of (0, theta_cap] that was cleared.
  double certificate_gap = std::numeric_limits<double>::infinity();
  bool empty_scan = false;
  std::uint64_t evaluations = 0;
  /// Sub-intervals narrower than working precision that could not be
  /// certified either way (margin touches zero without crossing).
  std::uint64_t uncertified = 0;
  /// Right end of the cleared range.
  double scanned_to = 0.0;

  bool found() const { return kind == Kind::Found; }
};

/// Raised when the evaluation budget runs out; carries the partial scan.
class LcdBudgetError : public BudgetError {
 public:
  LcdBudgetError(const std::string& what, LcdResult partial)
      : BudgetError(what), partial_(partial) {}
  const LcdResult& partial() const { return partial_; }

 private:
  LcdResult partial_;
};

/// Smallest theta in (0, theta_cap] with dist(theta v, Z^n) <
/// min(gamma ||theta v||, sqrt(alpha n)), located to q.resolution.
/// Intervals are cleared with the Lipschitz bound of the margin (constant
/// 1 + gamma), so no crossing between grid points is missed. With
/// workers > 1 the theta range is split into shards merged by minimum.
LcdResult lcd(const LcdQuery& q, unsigned workers = 1);

/// prod_j |phi(u_j)| for the entry law.
double char_fn_exact(const EntryDistribution& dist, const Vector& u);

struct CharFnBound {
  double lhs = 0.0;   // |E exp(i <u, Y>)|
  double rhs = 0.0;   // exp(-c0 inf_r ||r u / 2pi||_T^2)
  double inf_r = 0.0; // minimizing grid point
  bool holds = false;
};

inline constexpr std::size_t kCharFnGridPoints = 1000;
inline constexpr double kCharFnSlack = 1e-6;

/// Compare the exact characteristic function with the torus-norm bound,
/// the infimum over r taken on a geometric grid of [1, 1/c0]. Requires
/// 0 < c0 <= 1.
CharFnBound char_fn_bound_check(const EntryDistribution& dist, const Vector& u, double c0);

/// Sup norms of the kernel vector and the k smallest right singular vectors
/// of an (n-1) x n matrix: (||v||_inf, ||v_{n-1}||_inf, ..., ||v_{n-k}||_inf).
/// Empty when the kernel is not one-dimensional. Requires k <= n - 1.
std::optional<std::vector<double>> flatness(const Matrix& mstar, std::size_t k);

}  // namespace lsv
