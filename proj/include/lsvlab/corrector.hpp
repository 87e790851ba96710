#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lsvlab/linalg.hpp"
#include "lsvlab/spectra.hpp"

namespace lsv {

/// Default exponent c in delta_n = (ln n)^{-c}.
inline constexpr double kDefaultScheduleExponent = 1.0 / 16.0;

struct Schedule {
  double delta_n = 0.0;
  std::size_t ell = 1;
};

/// delta_n = (ln n)^{-c_sched}, ell = max(1, floor(sqrt(ln n))). Requires n >= 3.
Schedule schedule(std::size_t n, double c_sched = kDefaultScheduleExponent);

/// Spectral data of M* ((n-1) x n) needed to evaluate the correction factors.
/// Holds every right singular vector, smallest first.
class CorrectionContext {
 public:
  /// Takes ownership of a summary that carries all n-1 singular vectors.
  /// ell must lie in [1, n-1].
  CorrectionContext(SpectralSummary spectral, std::size_t ell,
                    double c_sched = kDefaultScheduleExponent);

  /// Factor M*. Without an explicit ell the schedule decides (needs n >= 3).
  static CorrectionContext from_matrix(const Matrix& mstar, std::optional<std::size_t> ell = {},
                                       double c_sched = kDefaultScheduleExponent);

  const SpectralSummary& spectral() const { return spectral_; }
  std::size_t n() const { return n_; }
  std::size_t ell() const { return ell_; }
  /// NaN when n < 3, where the schedule is undefined.
  double delta_n() const { return delta_n_; }
  double c_sched() const { return c_sched_; }

  /// sigma_{n-i}(M*) for i = 1..n-1, i.e. ascending.
  double sigma_from_bottom(std::size_t i) const { return spectral_.sigma_of_smallest(i - 1); }
  /// <v_{n-i}, y> for i = 1..n-1 (index 0 holds i = 1).
  std::vector<double> projections(const Vector& y) const;

 private:
  void require_nondegenerate(std::size_t count) const;

  friend double chi_full(const CorrectionContext&, const Vector&);
  friend double chi_trunc(const CorrectionContext&, const Vector&);

  SpectralSummary spectral_;
  std::size_t n_ = 0;
  std::size_t ell_ = 1;
  double delta_n_ = 0.0;
  double c_sched_ = kDefaultScheduleExponent;
  double frobenius_ = 0.0;
};

/// chi~(y) = (1 + sum_{i=1}^{n-1} <v_i, y>^2 / sigma_i(M*)^2)^{1/2} >= 1.
/// Throws DegenerateError if some sigma_i(M*) is numerically zero.
double chi_full(const CorrectionContext& ctx, const Vector& y);

/// chi(y) = (sum_{i=1}^{ell} <v_{n-i}, y>^2 / sigma_{n-i}(M*)^2)^{1/2}.
double chi_trunc(const CorrectionContext& ctx, const Vector& y);

/// |chi~^2 / chi^2 - 1|; +infinity when chi = 0. Diagnostic only.
double truncation_gap(const CorrectionContext& ctx, const Vector& y);

}  // namespace lsv
