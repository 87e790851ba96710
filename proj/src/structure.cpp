#include "lsvlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "lsvlab/spectra.hpp"

namespace lsv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct ScanOutcome {
  bool found = false;
  double theta = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  std::uint64_t uncertified = 0;
  double scanned_to = 0.0;
  bool exhausted = false;
};

struct Scanner {
  const LcdQuery& q;
  double start;
  double step;
  double lipschitz;
  std::uint64_t budget;

  double cell_left(std::uint64_t k) const { return start + static_cast<double>(k) * step; }
  double cell_right(std::uint64_t k) const {
    return std::min(q.theta_cap, start + static_cast<double>(k + 1) * step);
  }

  double margin(double theta, ScanOutcome& out) const {
    ++out.evaluations;
    return lcd_margin(q.v, theta, q.alpha, q.gamma);
  }

  // Cells [first, last) in order; stops at the first accepted theta.
  ScanOutcome run(std::uint64_t first, std::uint64_t last) const {
    ScanOutcome out;
    out.scanned_to = cell_left(first);
    if (first >= last) return out;

    struct Piece {
      double a, b, ga, gb;
    };
    std::vector<Piece> stack;
    double ga = margin(cell_left(first), out);
    out.gap = std::min(out.gap, ga);
    if (ga < 0.0) {
      out.found = true;
      out.theta = cell_left(first);
      return out;
    }
    for (std::uint64_t k = first; k < last; ++k) {
      if (out.evaluations >= budget) {
        out.exhausted = true;
        return out;
      }
      const double a = cell_left(k);
      const double b = cell_right(k);
      const double gb = margin(b, out);
      stack.clear();
      stack.push_back({a, b, ga, gb});
      while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        const double width = p.b - p.a;
        if (p.gb < 0.0 && width <= std::max(q.resolution, 8.0 * kEps * p.b)) {
          out.found = true;
          out.theta = p.b;
          out.scanned_to = p.a;
          return out;
        }
        if (0.5 * (p.ga + p.gb - lipschitz * width) >= 0.0) {
          out.gap = std::min({out.gap, p.ga, p.gb});
          continue;
        }
        if (width <= 8.0 * kEps * p.b) {
          ++out.uncertified;
          out.gap = std::min({out.gap, p.ga, p.gb});
          continue;
        }
        if (out.evaluations >= budget) {
          out.exhausted = true;
          out.scanned_to = p.a;
          return out;
        }
        const double m = p.a + 0.5 * width;
        const double gm = margin(m, out);
        stack.push_back({m, p.b, gm, p.gb});
        stack.push_back({p.a, m, p.ga, gm});
      }
      ga = gb;
      out.scanned_to = b;
    }
    return out;
  }
};

}  // namespace

double torus_norm(const Vector& v) {
  double s = 0.0;
  for (const double x : v) {
    const double d = x - std::nearbyint(x);
    s += d * d;
  }
  return std::sqrt(s);
}

double lcd_margin(const Vector& v, double theta, double alpha, double gamma) {
  double s = 0.0;
  for (const double x : v) {
    const double t = theta * x;
    const double d = t - std::nearbyint(t);
    s += d * d;
  }
  const double n = static_cast<double>(v.size());
  return std::sqrt(s) - std::min(gamma * theta * v.norm(), std::sqrt(alpha * n));
}

void LcdQuery::validate() const {
  if (v.size() == 0 || !v.allFinite()) throw InputError("lcd: vector must be non-empty and finite");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InputError("lcd: vector must have unit norm");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("lcd: alpha must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("lcd: gamma must lie in (0, 1)");
  if (!(theta_cap >= 0.0) || !std::isfinite(theta_cap)) {
    throw InputError("lcd: theta_cap must be finite and non-negative");
  }
  if (!(grid_step >= 0.0) || grid_step > gamma / 4.0) {
    throw InputError("lcd: grid_step must lie in [0, gamma/4]");
  }
  if (!(resolution > 0.0)) throw InputError("lcd: resolution must be positive");
}

LcdResult lcd(const LcdQuery& q, unsigned workers) {
  q.validate();
  LcdResult result;
  if (q.theta_cap == 0.0) {
    result.empty_scan = true;
    return result;
  }

  // Below 1/(2 ||v||_inf) every coordinate of theta v rounds to 0, so the
  // distance is theta > gamma theta and the inequality cannot hold.
  const double start = 0.5 / q.v.lpNorm<Eigen::Infinity>();
  if (q.theta_cap <= start) {
    result.scanned_to = q.theta_cap;
    return result;
  }

  const double step = q.step();
  const auto cells = static_cast<std::uint64_t>(std::ceil((q.theta_cap - start) / step));
  const unsigned shards = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(cells, 1)));
  const Scanner scanner{q, start, step, 1.0 + q.gamma,
                        std::max<std::uint64_t>(1, q.max_evaluations / shards)};

  std::vector<ScanOutcome> parts(shards);
  auto range = [&](unsigned s) {
    return std::pair<std::uint64_t, std::uint64_t>{cells * s / shards, cells * (s + 1) / shards};
  };
  if (shards == 1) {
    parts[0] = scanner.run(0, cells);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned s = 0; s < shards; ++s) {
      pool.emplace_back([&, s] {
        const auto [lo, hi] = range(s);
        parts[s] = scanner.run(lo, hi);
      });
    }
  }

  result.scanned_to = start;
  for (unsigned s = 0; s < shards; ++s) {
    const auto& part = parts[s];
    // a shard re-evaluates its left end, which the previous shard already did
    result.evaluations += part.evaluations - (s > 0 && part.evaluations > 0 ? 1 : 0);
    result.uncertified += part.uncertified;
    if (part.exhausted) {
      result.certificate_gap = std::min(result.certificate_gap, part.gap);
      result.scanned_to = part.scanned_to;
      throw LcdBudgetError("lcd: evaluation budget exhausted at theta = " +
                               std::to_string(part.scanned_to),
                           result);
    }
    if (part.found) {
      result.kind = LcdResult::Kind::Found;
      result.theta = part.theta;
      result.scanned_to = part.scanned_to;
      result.certificate_gap = std::min(result.certificate_gap, part.gap);
      return result;
    }
    result.certificate_gap = std::min(result.certificate_gap, part.gap);
    result.scanned_to = part.scanned_to;
  }
  return result;
}

double char_fn_exact(const EntryDistribution& dist, const Vector& u) {
  if (!u.allFinite()) throw InputError("char_fn_exact: non-finite argument");
  double product = 1.0;
  for (const double t : u) product *= std::abs(dist.char_fn(t));
  return product;
}

CharFnBound char_fn_bound_check(const EntryDistribution& dist, const Vector& u, double c0) {
  if (!(c0 > 0.0 && c0 <= 1.0)) throw InputError("char_fn_bound_check: c0 must lie in (0, 1]");
  CharFnBound out;
  out.lhs = char_fn_exact(dist, u);

  const Vector scaled = u / (2.0 * std::numbers::pi);
  const double top = 1.0 / c0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kCharFnGridPoints; ++k) {
    const double r =
        std::pow(top, static_cast<double>(k) / static_cast<double>(kCharFnGridPoints - 1));
    const double t = torus_norm(r * scaled);
    if (t * t < best) {
      best = t * t;
      out.inf_r = r;
    }
  }
  out.rhs = std::exp(-c0 * best);
  out.holds = out.lhs <= out.rhs + kCharFnSlack;
  return out;
}

std::optional<std::vector<double>> flatness(const Matrix& mstar, std::size_t k) {
  if (mstar.cols() < 2 || mstar.rows() + 1 != mstar.cols()) {
    throw InputError("flatness: expected an (n-1) x n matrix");
  }
  if (k > static_cast<std::size_t>(mstar.rows())) throw InputError("flatness: k exceeds n - 1");
  const SpectralSummary s = smallest_singular_pairs(mstar, k);
  if (s.sigma.back() <= kRankTolerance * mstar.norm()) return std::nullopt;
  std::vector<double> out;
  out.reserve(k + 1);
  out.push_back(s.kernel_vector->lpNorm<Eigen::Infinity>());
  for (const auto& v : s.smallest_vectors) out.push_back(v.lpNorm<Eigen::Infinity>());
  return out;
}

}  // namespace lsv
