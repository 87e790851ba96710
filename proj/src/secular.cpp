#include "lsvlab/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "lsvlab/corrector.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/spectra.hpp"

namespace lsv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Pole {
  double d;   // sigma^2
  double z2;  // squared coefficient
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Prepared {
  std::vector<Pole> active;   // distinct poles with nonzero weight, ascending
  std::vector<double> fixed;  // lambda values that pass through unchanged
  bool kernel_deflated = false;
};

Prepared prepare(const SecularProblem& p) {
  p.validate();
  const double tol = kDeflationTolerance * p.y_norm();
  Prepared out;

  std::vector<Pole> candidates;
  candidates.reserve(p.sigma_star.size() + 1);
  if (std::abs(p.kernel_inner) <= tol) {
    out.fixed.push_back(0.0);
    out.kernel_deflated = true;
  } else {
    candidates.push_back({0.0, p.kernel_inner * p.kernel_inner});
  }
  for (std::size_t i = 0; i < p.sigma_star.size(); ++i) {
    const double d = p.sigma_star[i] * p.sigma_star[i];
    if (std::abs(p.inner[i]) <= tol) {
      out.fixed.push_back(d);
    } else {
      candidates.push_back({d, p.inner[i] * p.inner[i]});
    }
  }

  // Merge poles that coincide to working precision. The merged pole keeps the
  // combined weight; every extra member leaves its own lambda unchanged.
  for (std::size_t k = 0; k < candidates.size();) {
    Pole group = candidates[k];
    std::size_t m = k + 1;
    while (m < candidates.size() &&
           candidates[m].d - group.d <= 4.0 * kEps * std::max(candidates[m].d, group.d)) {
      group.z2 += candidates[m].z2;
      out.fixed.push_back(candidates[m].d);
      ++m;
    }
    out.active.push_back(group);
    k = m;
  }
  return out;
}

// f(tau) = 1 + sum z2_i / (delta_i - tau) with delta_i = d_i - d_origin.
struct Secular {
  const std::vector<Pole>& poles;
  std::vector<double> delta;

  Secular(const std::vector<Pole>& p, std::size_t origin) : poles(p), delta(p.size()) {
    for (std::size_t i = 0; i < p.size(); ++i) delta[i] = p[i].d - p[origin].d;
  }

  double value(double tau) const {
    CompensatedSum s;
    s.add(1.0);
    for (std::size_t i = 0; i < poles.size(); ++i) s.add(poles[i].z2 / (delta[i] - tau));
    return s.value();
  }

  double derivative(double tau) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const double g = delta[i] - tau;
      s.add(poles[i].z2 / (g * g));
    }
    return s.value();
  }
};

// Midpoint that halves the relative width when the bracket touches zero or
// spans more than a factor of two.
double split(double lo, double hi) {
  if (lo >= 0.0) {
    if (lo == 0.0) return hi / 2.0;
    if (hi > 2.0 * lo) return std::sqrt(lo) * std::sqrt(hi);
    return lo + (hi - lo) / 2.0;
  }
  if (hi <= 0.0) return -split(-hi, -lo);
  return lo + (hi - lo) / 2.0;
}

// Root of the secular function between active poles j and j+1, or above the
// last pole when j is the last index. Returns lambda.
double solve_interval(const std::vector<Pole>& poles, std::size_t j,
                      std::optional<double> hint = std::nullopt) {
  const std::size_t count = poles.size();
  std::size_t origin = j;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<Secular> f;
  if (j + 1 < count) {
    const double gap = poles[j + 1].d - poles[j].d;
    f.emplace(poles, j);
    if (f->value(gap / 2.0) >= 0.0) {
      hi = gap / 2.0;
    } else {
      origin = j + 1;
      f.emplace(poles, origin);
      lo = -gap / 2.0;
    }
  } else {
    f.emplace(poles, j);
    CompensatedSum total;
    for (const auto& pole : poles) total.add(pole.z2);
    hi = total.value();
  }

  if (hint) {
    const double tau = *hint - poles[origin].d;
    if (tau > lo && tau < hi) {
      if (f->value(tau) >= 0.0) {
        hi = tau;
      } else {
        lo = tau;
      }
    }
  }

  // f increases in tau; keep f(lo) < 0 <= f(hi).
  for (int iter = 0; iter < 4000; ++iter) {
    const double mid = split(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    if (f->value(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Newton polish, kept only while it stays inside the bracket.
  double tau = split(lo, hi);
  if (!(tau > lo && tau < hi)) tau = (lo == 0.0) ? hi : (hi == 0.0 ? lo : tau);
  for (int step = 0; step < 2; ++step) {
    const double fv = f->value(tau);
    const double dv = f->derivative(tau);
    if (!(dv > 0.0) || !std::isfinite(fv)) break;
    const double next = tau - fv / dv;
    if (!(next >= lo && next <= hi) || next == 0.0) break;
    tau = next;
  }
  return poles[origin].d + tau;
}

}  // namespace

void SecularProblem::validate() const {
  if (sigma_star.size() != inner.size()) {
    throw InputError("SecularProblem: sigma_star and inner differ in length");
  }
  if (!std::isfinite(kernel_inner)) throw InputError("SecularProblem: non-finite kernel_inner");
  for (std::size_t i = 0; i < sigma_star.size(); ++i) {
    if (!std::isfinite(sigma_star[i]) || sigma_star[i] < 0.0) {
      throw InputError("SecularProblem: sigma_star must be finite and non-negative");
    }
    if (!std::isfinite(inner[i])) throw InputError("SecularProblem: non-finite inner product");
    if (i > 0 && sigma_star[i] < sigma_star[i - 1]) {
      throw InputError("SecularProblem: sigma_star must be ascending");
    }
  }
}

double SecularProblem::y_norm() const {
  double s = kernel_inner * kernel_inner;
  for (const double x : inner) s += x * x;
  return std::sqrt(s);
}

SecularProblem SecularProblem::from_split(const Matrix& astar, const Vector& y) {
  if (astar.cols() < 2 || astar.rows() + 1 != astar.cols()) {
    throw InputError("SecularProblem: expected an (n-1) x n matrix");
  }
  if (y.size() != astar.cols()) throw InputError("SecularProblem: row length mismatch");
  const auto n = static_cast<std::size_t>(astar.cols());
  const SpectralSummary s = smallest_singular_pairs(astar, n - 1);
  SecularProblem p;
  p.sigma_star.resize(n - 1);
  p.inner.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    p.sigma_star[j] = s.sigma_of_smallest(j);
    p.inner[j] = s.smallest_vectors[j].dot(y);
  }
  p.kernel_inner = s.kernel_vector->dot(y);
  return p;
}

std::vector<double> secular_spectrum(const SecularProblem& p) {
  const Prepared prep = prepare(p);
  std::vector<double> lambda = prep.fixed;
  for (std::size_t j = 0; j < prep.active.size(); ++j) {
    lambda.push_back(solve_interval(prep.active, j));
  }
  std::vector<double> out;
  out.reserve(lambda.size());
  for (const double l : lambda) out.push_back(std::sqrt(std::max(l, 0.0)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SecularRoot secular_least(const SecularProblem& p, double eps_hint) {
  const Prepared prep = prepare(p);
  if (prep.kernel_deflated) return {0.0, SecularFlag::Deflated};
  std::optional<double> hint;
  if (eps_hint > 0.0 && std::isfinite(eps_hint)) hint = eps_hint * eps_hint;
  const double root = solve_interval(prep.active, 0, hint);
  if (!prep.fixed.empty()) {
    const double floor = *std::min_element(prep.fixed.begin(), prep.fixed.end());
    if (floor <= root) return {std::sqrt(floor), SecularFlag::BoundaryDegenerate};
  }
  return {std::sqrt(root), SecularFlag::None};
}

ImplicationReport verify_update_implications(const Matrix& a, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("verify_update_implications: need 0 < eps < 1");
  if (a.rows() != a.cols() || a.rows() < 2) {
    throw InputError("verify_update_implications: need a square matrix with n >= 2");
  }
  if (!a.allFinite()) throw InputError("verify_update_implications: non-finite entries");

  const auto n = static_cast<std::size_t>(a.rows());
  const Matrix astar = without_last_row(a);
  const Vector y = last_row(a);
  ImplicationReport r;

  SpectralSummary summary = smallest_singular_pairs(astar, n - 1);
  r.sigma_star_min = summary.sigma.back();
  if (r.sigma_star_min <= kRankTolerance * astar.norm()) {
    r.skipped = true;
    return r;
  }
  const Vector u = *summary.kernel_vector;
  try {
    const CorrectionContext ctx(std::move(summary), 1);
    r.chi_full = chi_full(ctx, y);
  } catch (const DegenerateError&) {
    r.skipped = true;
    return r;
  }

  const double root_n = std::sqrt(static_cast<double>(n));
  r.kernel_inner = std::abs(u.dot(y));
  r.sigma_n = singular_values(a).back();
  r.scale = eps / root_n;
  r.premise1 = r.sigma_star_min >= std::pow(eps, 0.75) / root_n;
  r.antecedent = r.sigma_n <= r.scale;
  r.forward_ok = !(r.premise1 && r.antecedent) ||
                 r.kernel_inner <= (1.0 + std::pow(eps, 0.25)) * r.scale * r.chi_full;
  r.converse_ok = r.antecedent || r.kernel_inner > r.scale * r.chi_full;
  return r;
}

}  // namespace lsv
