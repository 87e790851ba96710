#include "lsvlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "lsvlab/errors.hpp"

namespace lsv {

namespace {

const double kSqrt3 = std::sqrt(3.0);

}  // namespace

EntryDistribution::EntryDistribution(DistKind kind, std::vector<double> support,
                                     std::vector<double> probs)
    : kind_(kind), support_(std::move(support)), probs_(std::move(probs)) {
  psi2_ = psi2_estimate(*this, kDefaultPsi2Pmax);
}

EntryDistribution EntryDistribution::rademacher() {
  return EntryDistribution(DistKind::Rademacher, {-1.0, 1.0}, {0.5, 0.5});
}

EntryDistribution EntryDistribution::gaussian() {
  return EntryDistribution(DistKind::StandardGaussian, {}, {});
}

EntryDistribution EntryDistribution::uniform() {
  return EntryDistribution(DistKind::UniformSymmetric, {}, {});
}

EntryDistribution EntryDistribution::discrete(std::vector<double> support,
                                              std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size()) {
    throw InputError("discrete law: support and probs must be non-empty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!std::isfinite(support[i]) || !std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw InputError("discrete law: support must be finite and probs non-negative");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kMomentTolerance) {
    throw InputError("discrete law: probabilities sum to " + std::to_string(total) + ", not 1");
  }

  // Symmetry: the mass at x equals the mass at -x.
  std::map<double, double> mass;
  for (std::size_t i = 0; i < support.size(); ++i) mass[support[i]] += probs[i];
  for (const auto& [x, m] : mass) {
    if (x == 0.0) continue;
    double mirrored = 0.0;
    for (const auto& [y, my] : mass) {
      if (std::abs(y + x) <= kMomentTolerance * std::max(1.0, std::abs(x))) mirrored += my;
    }
    if (std::abs(mirrored - m) > kMomentTolerance) {
      throw InputError("discrete law: not symmetric at support value " + std::to_string(x));
    }
  }

  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    mean += probs[i] * support[i];
    second += probs[i] * support[i] * support[i];
  }
  if (std::abs(mean) > kMomentTolerance) {
    throw InputError("discrete law: mean " + std::to_string(mean) + " is not 0");
  }
  const double variance = second - mean * mean;
  if (std::abs(variance - 1.0) > kMomentTolerance) {
    throw InputError("discrete law: variance " + std::to_string(variance) + " is not 1");
  }
  return EntryDistribution(DistKind::DiscreteSymmetric, std::move(support), std::move(probs));
}

EntryDistribution EntryDistribution::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ConfigError("distribution: missing string field 'kind'");
  }
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "rademacher") return rademacher();
  if (kind == "gaussian") return gaussian();
  if (kind == "uniform") return uniform();
  if (kind == "discrete") {
    if (!doc.contains("support") || !doc.contains("probs")) {
      throw ConfigError("distribution: discrete law needs 'support' and 'probs'");
    }
    try {
      return discrete(doc["support"].get<std::vector<double>>(),
                      doc["probs"].get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("distribution: ") + e.what());
    }
  }
  throw ConfigError("distribution: unknown kind '" + kind + "'");
}

EntryDistribution EntryDistribution::parse(const std::string& spec) {
  if (spec == "rademacher" || spec == "gaussian" || spec == "uniform") {
    return from_json(nlohmann::json{{"kind", spec}});
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(spec);
  } catch (const nlohmann::json::parse_error&) {
    throw ConfigError("distribution: '" + spec + "' is neither a keyword nor a JSON document");
  }
  return from_json(doc);
}

nlohmann::json EntryDistribution::to_json() const {
  nlohmann::json doc{{"kind", name()}};
  if (kind_ == DistKind::DiscreteSymmetric) {
    doc["support"] = support_;
    doc["probs"] = probs_;
  }
  return doc;
}

std::string EntryDistribution::name() const {
  switch (kind_) {
    case DistKind::Rademacher:
      return "rademacher";
    case DistKind::StandardGaussian:
      return "gaussian";
    case DistKind::UniformSymmetric:
      return "uniform";
    case DistKind::DiscreteSymmetric:
      return "discrete";
  }
  return "unknown";
}

bool EntryDistribution::is_continuous() const {
  return kind_ == DistKind::StandardGaussian || kind_ == DistKind::UniformSymmetric;
}

double EntryDistribution::abs_moment(double p) const {
  switch (kind_) {
    case DistKind::Rademacher:
      return 1.0;
    case DistKind::StandardGaussian:
      return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    case DistKind::UniformSymmetric:
      return std::pow(kSqrt3, p) / (p + 1.0);
    case DistKind::DiscreteSymmetric: {
      double m = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        if (support_[i] != 0.0) m += probs_[i] * std::pow(std::abs(support_[i]), p);
      }
      return m;
    }
  }
  return 0.0;
}

double EntryDistribution::char_fn(double t) const {
  switch (kind_) {
    case DistKind::Rademacher:
      return std::cos(t);
    case DistKind::StandardGaussian:
      return std::exp(-0.5 * t * t);
    case DistKind::UniformSymmetric: {
      const double a = kSqrt3 * t;
      return a == 0.0 ? 1.0 : std::sin(a) / a;
    }
    case DistKind::DiscreteSymmetric: {
      double phi = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) phi += probs_[i] * std::cos(support_[i] * t);
      return phi;
    }
  }
  return 0.0;
}

double sample_entry(const EntryDistribution& dist, Rng& stream) {
  switch (dist.kind()) {
    case DistKind::Rademacher:
      return stream.sign();
    case DistKind::StandardGaussian:
      return stream.normal();
    case DistKind::UniformSymmetric:
      return (2.0 * stream.uniform() - 1.0) * kSqrt3;
    case DistKind::DiscreteSymmetric: {
      const double u = stream.uniform();
      const auto& support = dist.support();
      const auto& probs = dist.probs();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < support.size(); ++i) {
        acc += probs[i];
        if (u < acc) return support[i];
      }
      return support.back();
    }
  }
  return 0.0;
}

Vector sample_vector(const EntryDistribution& dist, std::size_t n, Rng& stream) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = sample_entry(dist, stream);
  return v;
}

MatrixSample sample_matrix(const EntryDistribution& dist, std::size_t rows, std::size_t cols,
                           std::uint64_t seed, std::size_t entry_budget) {
  if (rows == 0 || cols == 0) throw InputError("sample_matrix: rows and cols must be >= 1");
  if (rows > entry_budget / cols) {
    throw SizingError("sample_matrix: " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " exceeds the entry budget of " + std::to_string(entry_budget));
  }
  MatrixSample out{Matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)), seed,
                   dist};
  Rng stream(seed);
  double* data = out.entries.data();
  const std::size_t total = rows * cols;
  for (std::size_t i = 0; i < total; ++i) data[i] = sample_entry(dist, stream);
  return out;
}

double psi2_estimate(const EntryDistribution& dist, int p_max) {
  if (p_max < 2) throw InputError("psi2_estimate: p_max must be >= 2");
  double best = 0.0;
  for (int p = 1; p <= p_max; ++p) {
    const double pd = static_cast<double>(p);
    best = std::max(best, std::pow(dist.abs_moment(pd), 1.0 / pd) / std::sqrt(pd));
  }
  return best;
}

}  // namespace lsv
