#pragma once

#include <cstddef>
#include <vector>

namespace lsv {

// Fourier convention: psihat(t) = int psi(x) exp(-2 pi i t x) dx.

/// Default absolute tolerance for the transform quadratures.
inline constexpr double kBumpTolerance = 1e-12;

/// exp(-1/(1 - 4x^2)) on |x| < 1/2, zero elsewhere.
double psihat_base(double x);

/// int psihat_base^2, the value of the self-convolution at 0.
double bump_normalization();

/// (psihat_base * psihat_base)(x) / bump_normalization(); supported in
/// [-1, 1] with psihat(0) = 1.
double psihat(double x, double tol = kBumpTolerance);

/// k-th derivative (k = 0..3) of beta(x) = int psihat_base(t) cos(2 pi t x) dt.
double bump_beta(double x, int order = 0, double tol = kBumpTolerance);

/// psi(x) = beta(x)^2 / bump_normalization(), the inverse transform of psihat.
double psi(double x, double tol = kBumpTolerance);

/// d^k psi / dx^k for k = 0..3.
double psi_derivative(double x, int order, double tol = kBumpTolerance);

/// Inverse transform int_{-1}^{1} psihat(t) cos(2 pi t x) dt evaluated with
/// nested quadrature; an independent route to psi(x).
double psi_direct(double x, double tol = 1e-10);

/// (2 pi)^3 int |t|^3 psihat(t) dt, which bounds sup |psi'''|.
double psi_third_derivative_bound(double tol = 1e-11);

/// Fast evaluation of psi and its first three derivatives for bulk use:
/// beta is computed by the trapezoid rule on fixed nodes, which converges
/// faster than any power because psihat_base is flat at +-1/2.
class BumpEvaluator {
 public:
  explicit BumpEvaluator(std::size_t nodes = 512);

  /// Accurate for |x| well below nodes / 2.
  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;
  double max_abs_x() const { return 0.25 * static_cast<double>(t_.size()); }

 private:
  std::vector<double> t_;
  std::vector<double> w_;
};

struct BumpTable {
  double grid_max = 0.0;
  double step = 0.0;
  double tolerance = kBumpTolerance;
  std::vector<double> grid;
  std::vector<double> psi_values;
  std::vector<double> psihat_grid;
  std::vector<double> psihat_values;
  double normalization = 0.0;
  double decay_constant_fit = 0.0;
  /// Trapezoid sum of psi over the grid.
  double integral = 0.0;
  /// Decay constant fitted on |x| >= grid_max / 2 only.
  double tail_decay_fit = 0.0;
  /// int over |x| > grid_max of exp(-c (|x|+1)^{1/2}) with c = tail_decay_fit.
  double tail_bound = 0.0;
  /// int psihat^2 on the psihat grid (Simpson) and int psi^2 on the x grid
  /// (trapezoid); equal by Plancherel.
  double psihat_l2 = 0.0;
  double psi_l2 = 0.0;
  /// Largest |psi'''| seen on the grid.
  double third_derivative_grid_max = 0.0;

  /// Symmetric grid -grid_max..grid_max. Requires grid_max >= 10 and
  /// 0 < step < 1. Throws ConstructionError if the decay fit is not positive.
  static BumpTable build(double grid_max, double step, double tol = kBumpTolerance,
                         std::size_t psihat_points = 401);
};

/// Largest c with values[i] <= exp(-c (|grid[i]|+1)^{1/2}) at every point.
double fit_decay_constant(const std::vector<double>& grid, const std::vector<double>& values);

/// c fitted on a freshly built table; throws ConstructionError when c <= 0.
double decay_certificate(double grid_max, double step, double tol = kBumpTolerance);

/// 4 e^{-c s} (s/c + 1/c^2) with s = sqrt(grid_max + 1): the mass of
/// exp(-c (|x|+1)^{1/2}) beyond |x| = grid_max, both tails.
double decay_tail_mass(double c, double grid_max);

}  // namespace lsv
