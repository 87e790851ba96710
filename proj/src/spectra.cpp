#include "lsvlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "lsvlab/errors.hpp"
#include "lsvlab/rng.hpp"

namespace lsv {

namespace {

using ColMatrix = Eigen::MatrixXd;

void require_finite(const Matrix& a, const char* where) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw InputError(std::string(where) + ": matrix must be non-empty");
  }
  if (!a.allFinite()) throw InputError(std::string(where) + ": non-finite entries");
}

std::vector<double> values_only(const ColMatrix& a) {
  Eigen::BDCSVD<ColMatrix> svd(a);
  if (svd.info() != Eigen::Success) throw DegenerateError("singular_values: SVD did not converge");
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

// Largest eigenvalue and the last component of its eigenvector for the
// symmetric tridiagonal matrix with diagonal alpha and off-diagonal beta.
std::pair<double, double> tridiagonal_top(const std::vector<double>& alpha,
                                          const std::vector<double>& beta, std::size_t size) {
  const auto k = static_cast<Eigen::Index>(size);
  if (k == 1) return {alpha[0], 1.0};
  Vector d = Eigen::Map<const Vector>(alpha.data(), k);
  Vector e = Eigen::Map<const Vector>(beta.data(), k - 1);
  Eigen::SelfAdjointEigenSolver<ColMatrix> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) return {std::nan(""), std::nan("")};
  // Eigenvalues ascending; the last column holds the top eigenvector.
  return {es.eigenvalues()(k - 1), es.eigenvectors()(k - 1, k - 1)};
}

std::optional<double> least_by_lanczos(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Eigen::PartialPivLU<ColMatrix> lu(a);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 0.0)) return std::nullopt;  // exactly singular pivot

  // Lanczos on K = A^{-T} A^{-1} = (A A^T)^{-1}, whose top eigenvalue is 1/sigma_n^2.
  const std::size_t max_steps = std::min<std::size_t>(static_cast<std::size_t>(n), 96);
  ColMatrix basis(n, static_cast<Eigen::Index>(max_steps + 1));
  std::vector<double> alpha(max_steps, 0.0);
  std::vector<double> beta(max_steps, 0.0);

  Rng start(0x1a2c705ULL);
  Vector q(n);
  for (auto& x : q) x = start.uniform() - 0.5;
  basis.col(0) = q / q.norm();

  Vector w(n);
  for (std::size_t j = 0; j < max_steps; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    w = lu.transpose().solve(lu.solve(basis.col(jj)));
    if (!w.allFinite()) return std::nullopt;

    alpha[j] = basis.col(jj).dot(w);
    // Full reorthogonalization against every basis vector (two passes of
    // classical Gram-Schmidt); this also removes the alpha and beta terms.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector h = basis.leftCols(jj + 1).transpose() * w;
      w.noalias() -= basis.leftCols(jj + 1) * h;
    }
    beta[j] = w.norm();

    const auto [theta, last] = tridiagonal_top(alpha, beta, j + 1);
    if (!std::isfinite(theta) || theta <= 0.0) return std::nullopt;
    const double residual = beta[j] * std::abs(last);
    if (residual <= 1e-13 * theta || beta[j] <= 1e-300) return 1.0 / std::sqrt(theta);
    basis.col(jj + 1) = w / beta[j];
  }
  return std::nullopt;
}

}  // namespace

void canonical_sign(Vector& v) {
  for (const double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0.0) v = -v;
      return;
    }
  }
}

std::vector<double> singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  return values_only(ColMatrix(a));
}

double least_singular_value(const Matrix& a) {
  require_finite(a, "least_singular_value");
  if (a.rows() != a.cols()) throw InputError("least_singular_value: matrix must be square");
  if (a.rows() > 16) {
    if (const auto sigma = least_by_lanczos(a)) return *sigma;
  }
  return values_only(ColMatrix(a)).back();
}

SpectralSummary smallest_singular_pairs(const Matrix& a, std::size_t k) {
  require_finite(a, "smallest_singular_pairs");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const std::size_t r = static_cast<std::size_t>(std::min(m, n));
  if (k > r) {
    throw InputError("smallest_singular_pairs: k = " + std::to_string(k) +
                     " exceeds min(rows, cols) = " + std::to_string(r));
  }

  Eigen::BDCSVD<ColMatrix> svd(ColMatrix(a), Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw DegenerateError("smallest_singular_pairs: SVD did not converge");
  }
  const auto& s = svd.singularValues();
  const ColMatrix& v_full = svd.matrixV();

  SpectralSummary out;
  out.sigma.assign(s.data(), s.data() + s.size());
  out.source_dims = {static_cast<std::size_t>(m), static_cast<std::size_t>(n)};
  out.smallest_vectors.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    Vector v = v_full.col(static_cast<Eigen::Index>(r - 1 - j));
    canonical_sign(v);
    out.smallest_vectors.push_back(std::move(v));
  }
  if (m < n) {
    Vector v = v_full.col(n - 1);
    canonical_sign(v);
    out.kernel_vector = std::move(v);
  }
  return out;
}

Vector kernel_vector(const Matrix& astar) {
  if (astar.cols() < 2 || astar.rows() != astar.cols() - 1) {
    throw InputError("kernel_vector: expected an (n-1) x n matrix");
  }
  const SpectralSummary summary = smallest_singular_pairs(astar, 0);
  const double frob = astar.norm();
  if (summary.sigma.back() <= kRankTolerance * frob) {
    throw DegenerateError("kernel_vector: matrix is rank deficient, kernel is not one-dimensional");
  }
  return *summary.kernel_vector;
}

}  // namespace lsv
