#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lsvlab/linalg.hpp"

namespace lsv {

/// Relative threshold below which a singular value counts as zero:
/// sigma <= kRankTolerance * ||A||_F.
inline constexpr double kRankTolerance = 1e-10;

struct SpectralSummary {
  /// All singular values, descending.
  std::vector<double> sigma;
  /// Right singular vectors for the k smallest singular values, smallest
  /// first: smallest_vectors[j] pairs with sigma[sigma.size() - 1 - j].
  std::vector<Vector> smallest_vectors;
  /// Unit kernel vector, present iff rows < cols.
  std::optional<Vector> kernel_vector;
  std::pair<std::size_t, std::size_t> source_dims{0, 0};

  /// Singular value paired with smallest_vectors[j].
  double sigma_of_smallest(std::size_t j) const { return sigma[sigma.size() - 1 - j]; }
};

/// All singular values of a, descending. Throws InputError on empty or
/// non-finite input.
std::vector<double> singular_values(const Matrix& a);

/// Least singular value of a square matrix. Uses an LU factorization and
/// Lanczos iteration on (A A^T)^{-1}; falls back to the full SVD when the
/// factorization is singular or the iteration does not converge.
double least_singular_value(const Matrix& a);

/// Full singular values plus the right singular vectors of the k smallest.
/// Vectors follow the sign convention of canonical_sign. Throws InputError
/// when k > min(rows, cols).
SpectralSummary smallest_singular_pairs(const Matrix& a, std::size_t k);

/// Unit kernel vector of an (n-1) x n matrix, first nonzero coordinate
/// positive. Throws InputError on other shapes and DegenerateError when
/// sigma_{n-1} <= kRankTolerance * ||A||_F.
Vector kernel_vector(const Matrix& astar);

/// Flip v so that its first coordinate with |v_i| > 1e-12 is positive.
void canonical_sign(Vector& v);

}  // namespace lsv
