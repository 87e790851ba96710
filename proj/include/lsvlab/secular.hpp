#pragma once

#include <cstddef>
#include <vector>

#include "lsvlab/linalg.hpp"

namespace lsv {

/// Coefficients |<u_i, Y>| at or below this multiple of ||Y|| are dropped.
inline constexpr double kDeflationTolerance = 1e-13;

/// Rank-one row update: A* ((n-1) x n) with singular values sigma_star
/// (ascending), the new row Y expressed through its inner products with the
/// right singular vectors of A* and with the kernel vector u.
struct SecularProblem {
  std::vector<double> sigma_star;
  std::vector<double> inner;
  double kernel_inner = 0.0;

  /// Throws InputError if lengths differ, a value is negative or non-finite,
  /// or sigma_star is not ascending.
  void validate() const;

  /// sqrt(sum inner^2 + kernel_inner^2), which equals ||Y||.
  double y_norm() const;

  /// Decompose Y against the SVD of astar ((n-1) x n).
  static SecularProblem from_split(const Matrix& astar, const Vector& y);
};

/// All n singular values of the stacked matrix, descending.
std::vector<double> secular_spectrum(const SecularProblem& p);

enum class SecularFlag { None, Deflated, BoundaryDegenerate };

struct SecularRoot {
  double value = 0.0;
  SecularFlag flag = SecularFlag::None;
};

/// Least singular value of the stacked matrix: the root in (0, sigma_{n-1})
/// of 1 + sum <u_i,Y>^2 / (sigma_i^2 - x^2) = <u,Y>^2 / x^2.
/// kernel_inner deflated -> {0, Deflated}. When a deflated or repeated
/// sigma_i lies at or below the secular root, that sigma is returned with
/// BoundaryDegenerate. eps_hint > 0 narrows the initial bracket.
SecularRoot secular_least(const SecularProblem& p, double eps_hint = 0.0);

struct ImplicationReport {
  bool skipped = false;
  bool premise1 = false;
  bool antecedent = false;
  bool forward_ok = true;
  bool converse_ok = true;
  double sigma_n = 0.0;          // sigma_n(A)
  double sigma_star_min = 0.0;   // sigma_{n-1}(A*)
  double kernel_inner = 0.0;     // |<u, Y>|
  double chi_full = 0.0;         // chi~(Y)
  double scale = 0.0;            // eps n^{-1/2}

  bool both_ok() const { return skipped || (forward_ok && converse_ok); }
};

/// Check both directions of the update inequality on a square matrix a.
/// Requires 0 < eps < 1 and n >= 2. A rank-deficient A* gives skipped = true.
ImplicationReport verify_update_implications(const Matrix& a, double eps);

}  // namespace lsv
