#include "lsvlab/corrector.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lsvlab/errors.hpp"

namespace lsv {

Schedule schedule(std::size_t n, double c_sched) {
  if (n < 3) throw InputError("schedule: n must be >= 3");
  if (!(c_sched > 0.0)) throw InputError("schedule: c_sched must be positive");
  const double log_n = std::log(static_cast<double>(n));
  const auto ell = static_cast<std::size_t>(std::floor(std::sqrt(log_n)));
  return {std::pow(log_n, -c_sched), std::max<std::size_t>(1, ell)};
}

CorrectionContext::CorrectionContext(SpectralSummary spectral, std::size_t ell, double c_sched)
    : spectral_(std::move(spectral)), ell_(ell), c_sched_(c_sched) {
  const auto [rows, cols] = spectral_.source_dims;
  if (cols < 2 || rows + 1 != cols) {
    throw InputError("CorrectionContext: expected the spectrum of an (n-1) x n matrix");
  }
  n_ = cols;
  if (spectral_.smallest_vectors.size() != n_ - 1 || spectral_.sigma.size() != n_ - 1) {
    throw InputError("CorrectionContext: all n-1 singular pairs are required");
  }
  if (ell_ < 1 || ell_ > n_ - 1) {
    throw InputError("CorrectionContext: ell = " + std::to_string(ell_) + " outside [1, " +
                     std::to_string(n_ - 1) + "]");
  }
  delta_n_ = n_ >= 3 ? schedule(n_, c_sched_).delta_n : std::numeric_limits<double>::quiet_NaN();
  double sum_sq = 0.0;
  for (const double s : spectral_.sigma) sum_sq += s * s;
  frobenius_ = std::sqrt(sum_sq);
}

CorrectionContext CorrectionContext::from_matrix(const Matrix& mstar,
                                                 std::optional<std::size_t> ell, double c_sched) {
  if (mstar.cols() < 2 || mstar.rows() + 1 != mstar.cols()) {
    throw InputError("CorrectionContext: expected an (n-1) x n matrix");
  }
  const auto n = static_cast<std::size_t>(mstar.cols());
  const std::size_t chosen = ell ? *ell : schedule(n, c_sched).ell;
  return CorrectionContext(smallest_singular_pairs(mstar, n - 1), chosen, c_sched);
}

std::vector<double> CorrectionContext::projections(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != n_) {
    throw InputError("correction factor: vector length " + std::to_string(y.size()) +
                     " does not match n = " + std::to_string(n_));
  }
  std::vector<double> p(n_ - 1);
  for (std::size_t i = 0; i + 1 < n_; ++i) p[i] = spectral_.smallest_vectors[i].dot(y);
  return p;
}

void CorrectionContext::require_nondegenerate(std::size_t count) const {
  for (std::size_t i = 0; i < count; ++i) {
    if (spectral_.sigma_of_smallest(i) <= kRankTolerance * frobenius_) {
      throw DegenerateError("correction factor: sigma_{n-" + std::to_string(i + 1) +
                            "}(M*) is numerically zero");
    }
  }
}

double chi_full(const CorrectionContext& ctx, const Vector& y) {
  const auto p = ctx.projections(y);
  ctx.require_nondegenerate(p.size());
  // Largest singular values first, so the dominant small-sigma terms are
  // added last.
  double sum = 1.0;
  for (std::size_t i = p.size(); i-- > 0;) {
    const double r = p[i] / ctx.spectral_.sigma_of_smallest(i);
    sum += r * r;
  }
  return std::sqrt(sum);
}

double chi_trunc(const CorrectionContext& ctx, const Vector& y) {
  const auto p = ctx.projections(y);
  ctx.require_nondegenerate(ctx.ell_);
  double sum = 0.0;
  for (std::size_t i = ctx.ell_; i-- > 0;) {
    const double r = p[i] / ctx.spectral_.sigma_of_smallest(i);
    sum += r * r;
  }
  return std::sqrt(sum);
}

double truncation_gap(const CorrectionContext& ctx, const Vector& y) {
  const double chi = chi_trunc(ctx, y);
  if (chi == 0.0) return std::numeric_limits<double>::infinity();
  const double full = chi_full(ctx, y);
  return std::abs((full * full) / (chi * chi) - 1.0);
}

}  // namespace lsv
