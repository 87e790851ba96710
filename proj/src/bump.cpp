#include "lsvlab/bump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lsvlab/errors.hpp"
#include "lsvlab/quadrature.hpp"

namespace lsv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t oscillation_panels(double x) {
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(2.0 * std::abs(x))));
}

}  // namespace

double psihat_base(double x) {
  if (!(std::abs(x) < 0.5)) return 0.0;
  const double q = 1.0 - 4.0 * x * x;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_normalization() {
  static const double z = 2.0 * adaptive_simpson(
                                    [](double t) {
                                      const double b = psihat_base(t);
                                      return b * b;
                                    },
                                    0.0, 0.5, 1e-16, 16);
  return z;
}

double psihat(double x, double tol) {
  const double ax = std::abs(x);
  if (!(ax < 1.0)) return 0.0;
  const double raw = adaptive_simpson(
      [ax](double t) { return psihat_base(t) * psihat_base(ax - t); }, ax - 0.5, 0.5, tol, 8);
  return raw / bump_normalization();
}

double bump_beta(double x, int order, double tol) {
  if (order < 0 || order > 3) throw InputError("bump_beta: order must be 0..3");
  auto integrand = [x, order](double t) {
    const double w = kTwoPi * t;
    const double b = 2.0 * psihat_base(t);
    switch (order) {
      case 0:
        return b * std::cos(w * x);
      case 1:
        return -b * w * std::sin(w * x);
      case 2:
        return -b * w * w * std::cos(w * x);
      default:
        return b * w * w * w * std::sin(w * x);
    }
  };
  return adaptive_simpson(integrand, 0.0, 0.5, tol, oscillation_panels(x));
}

double psi(double x, double tol) {
  const double b = bump_beta(x, 0, tol);
  return b * b / bump_normalization();
}

double psi_derivative(double x, int order, double tol) {
  const double z = bump_normalization();
  const double b0 = bump_beta(x, 0, tol);
  switch (order) {
    case 0:
      return b0 * b0 / z;
    case 1:
      return 2.0 * b0 * bump_beta(x, 1, tol) / z;
    case 2: {
      const double b1 = bump_beta(x, 1, tol);
      return 2.0 * (b1 * b1 + b0 * bump_beta(x, 2, tol)) / z;
    }
    case 3: {
      const double b1 = bump_beta(x, 1, tol);
      const double b2 = bump_beta(x, 2, tol);
      return 2.0 * (3.0 * b1 * b2 + b0 * bump_beta(x, 3, tol)) / z;
    }
    default:
      throw InputError("psi_derivative: order must be 0..3");
  }
}

double psi_direct(double x, double tol) {
  return 2.0 * adaptive_simpson(
                   [x, tol](double t) { return psihat(t, 0.01 * tol) * std::cos(kTwoPi * t * x); },
                   0.0, 1.0, tol, 2 * oscillation_panels(x));
}

double psi_third_derivative_bound(double tol) {
  const double moment = 2.0 * adaptive_simpson(
                                  [tol](double t) { return t * t * t * psihat(t, 0.01 * tol); },
                                  0.0, 1.0, tol, 16);
  return kTwoPi * kTwoPi * kTwoPi * moment;
}

BumpEvaluator::BumpEvaluator(std::size_t nodes) {
  if (nodes < 16) throw InputError("BumpEvaluator: need at least 16 nodes");
  // beta(x) = 2 int_0^{1/2} psihat_base(t) cos(2 pi t x) dt; the endpoint
  // t = 1/2 contributes nothing.
  const double h = 0.5 / static_cast<double>(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = static_cast<double>(k) * h;
    t_.push_back(t);
    w_.push_back((k == 0 ? 1.0 : 2.0) * h * psihat_base(t));
  }
}

double BumpEvaluator::derivative(double x, int order) const {
  if (order < 0 || order > 3) throw InputError("BumpEvaluator: order must be 0..3");
  double b[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < t_.size(); ++k) {
    const double w = kTwoPi * t_[k];
    const double c = std::cos(w * x);
    b[0] += w_[k] * c;
    if (order == 0) continue;
    const double s = std::sin(w * x);
    b[1] -= w_[k] * w * s;
    b[2] -= w_[k] * w * w * c;
    b[3] += w_[k] * w * w * w * s;
  }
  const double z = bump_normalization();
  switch (order) {
    case 0:
      return b[0] * b[0] / z;
    case 1:
      return 2.0 * b[0] * b[1] / z;
    case 2:
      return 2.0 * (b[1] * b[1] + b[0] * b[2]) / z;
    default:
      return 2.0 * (3.0 * b[1] * b[2] + b[0] * b[3]) / z;
  }
}

double fit_decay_constant(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size()) throw InputError("fit_decay_constant: size mismatch");
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] <= 0.0) continue;
    c = std::min(c, -std::log(values[i]) / std::sqrt(std::abs(grid[i]) + 1.0));
  }
  return c;
}

double decay_tail_mass(double c, double grid_max) {
  if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
  const double s = std::sqrt(grid_max + 1.0);
  return 4.0 * std::exp(-c * s) * (s / c + 1.0 / (c * c));
}

BumpTable BumpTable::build(double grid_max, double step, double tol, std::size_t psihat_points) {
  if (!(grid_max >= 10.0) || !std::isfinite(grid_max)) {
    throw InputError("BumpTable: grid_max must be at least 10");
  }
  if (!(step > 0.0 && step < 1.0)) throw InputError("BumpTable: step must lie in (0, 1)");
  if (psihat_points < 3 || psihat_points % 2 == 0) {
    throw InputError("BumpTable: psihat_points must be odd and at least 3");
  }

  BumpTable t;
  t.step = step;
  t.tolerance = tol;
  t.normalization = bump_normalization();
  const auto half = static_cast<std::ptrdiff_t>(std::llround(grid_max / step));
  t.grid_max = static_cast<double>(half) * step;

  std::vector<double> positive(static_cast<std::size_t>(half) + 1);
  std::vector<double> third(static_cast<std::size_t>(half) + 1);
  for (std::ptrdiff_t k = 0; k <= half; ++k) {
    const double x = static_cast<double>(k) * step;
    positive[static_cast<std::size_t>(k)] = psi(x, tol);
    third[static_cast<std::size_t>(k)] = std::abs(psi_derivative(x, 3, tol));
  }
  t.grid.reserve(static_cast<std::size_t>(2 * half + 1));
  t.psi_values.reserve(t.grid.capacity());
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    t.grid.push_back(static_cast<double>(k) * step);
    t.psi_values.push_back(positive[static_cast<std::size_t>(std::abs(k))]);
  }
  t.third_derivative_grid_max = *std::max_element(third.begin(), third.end());

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < t.psi_values.size(); ++i) {
    const double w = (i == 0 || i + 1 == t.psi_values.size()) ? 0.5 : 1.0;
    sum += w * t.psi_values[i];
    sum_sq += w * t.psi_values[i] * t.psi_values[i];
  }
  t.integral = step * sum;
  t.psi_l2 = step * sum_sq;

  const double h = 2.0 / static_cast<double>(psihat_points - 1);
  t.psihat_grid.resize(psihat_points);
  t.psihat_values.resize(psihat_points);
  for (std::size_t i = 0; i < psihat_points; ++i) {
    const double x = -1.0 + static_cast<double>(i) * h;
    t.psihat_grid[i] = x;
    const std::size_t mirror = psihat_points - 1 - i;
    t.psihat_values[i] = mirror < i ? t.psihat_values[mirror] : psihat(x, tol);
  }
  double simpson = 0.0;
  for (std::size_t i = 0; i < psihat_points; ++i) {
    const double w = (i == 0 || i + 1 == psihat_points) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    simpson += w * t.psihat_values[i] * t.psihat_values[i];
  }
  t.psihat_l2 = simpson * h / 3.0;

  t.decay_constant_fit = fit_decay_constant(t.grid, t.psi_values);
  if (!(t.decay_constant_fit > 0.0)) {
    throw ConstructionError("BumpTable: decay fit is not positive (c = " +
                            std::to_string(t.decay_constant_fit) + ")");
  }
  std::vector<double> outer_x;
  std::vector<double> outer_v;
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    if (std::abs(t.grid[i]) >= 0.5 * t.grid_max) {
      outer_x.push_back(t.grid[i]);
      outer_v.push_back(t.psi_values[i]);
    }
  }
  t.tail_decay_fit = fit_decay_constant(outer_x, outer_v);
  t.tail_bound = decay_tail_mass(t.tail_decay_fit, t.grid_max);
  return t;
}

double decay_certificate(double grid_max, double step, double tol) {
  return BumpTable::build(grid_max, step, tol).decay_constant_fit;
}

}  // namespace lsv
