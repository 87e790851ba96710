#pragma once

#include <Eigen/Dense>

namespace lsv {

/// Dense real matrix, row-major so that row slicing (M* and the last row X)
/// is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// First rows-1 rows of a square matrix (M*).
inline Matrix without_last_row(const Matrix& a) { return a.topRows(a.rows() - 1); }

/// Last row of a matrix as a column vector (X).
inline Vector last_row(const Matrix& a) { return a.row(a.rows() - 1).transpose(); }

/// Stack a row under a matrix: [a; y^T].
inline Matrix stack_row(const Matrix& a, const Vector& y) {
  Matrix out(a.rows() + 1, a.cols());
  out.topRows(a.rows()) = a;
  out.row(a.rows()) = y.transpose();
  return out;
}

}  // namespace lsv
