#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lsvlab/ensemble.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/rng.hpp"
#include "lsvlab/secular.hpp"
#include "lsvlab/spectra.hpp"
#include "oracles.hpp"

using namespace lsv;

namespace {
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

SecularProblem make(std::vector<double> s, std::vector<double> in, double k) {
  SecularProblem p;
  p.sigma_star = std::move(s);
  p.inner = std::move(in);
  p.kernel_inner = k;
  return p;
}
}  // namespace

TEST_CASE("golden ratio update") {
  const auto p = make({1}, {1}, 1);
  const auto s = secular_spectrum(p);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(kPhi).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(kPhi - 1).epsilon(1e-15));
  const auto root = secular_least(p);
  CHECK(root.flag == SecularFlag::None);
  CHECK(std::abs(root.value - 0.6180339887498949) <= 1e-14);

  Matrix astar(1, 2);
  astar << 1, 0;
  Vector y(2);
  y << 1, 1;
  const auto q = SecularProblem::from_split(astar, y);
  CHECK(q.sigma_star[0] == doctest::Approx(1.0));
  CHECK(std::abs(q.inner[0]) == doctest::Approx(1.0));
  CHECK(std::abs(q.kernel_inner) == doctest::Approx(1.0));
}

TEST_CASE("deflated and degenerate problems") {
  const auto p = make({1}, {0}, 2);
  const auto s = secular_spectrum(p);
  CHECK(s[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
  const auto r = secular_least(p);
  CHECK(r.flag == SecularFlag::BoundaryDegenerate);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));

  const auto z = secular_spectrum(make({1, 1}, {0, 0}, 0));
  REQUIRE(z.size() == 3);
  CHECK(z[0] == doctest::Approx(1.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(z[2] == 0.0);

  const auto k = secular_least(make({0.5, 2}, {0.3, 1.2}, 0));
  CHECK(k.flag == SecularFlag::Deflated);
  CHECK(k.value == 0.0);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(make({1, 2}, {1}, 0).validate(), InputError);
  CHECK_THROWS_AS(make({2, 1}, {1, 1}, 0).validate(), InputError);
  CHECK_THROWS_AS(make({-1}, {1}, 0).validate(), InputError);
  CHECK(make({3}, {4}, 0).y_norm() == doctest::Approx(4.0));
}

TEST_CASE("secular spectrum against the SVD") {
  const EntryDistribution laws[] = {EntryDistribution::gaussian(), EntryDistribution::rademacher(),
                                    EntryDistribution::uniform()};
  for (const auto& law : laws) {
    for (std::uint64_t t = 0; t < 60; ++t) {
      const std::size_t n = 2 + t % 40;
      const auto m = sample_matrix(law, n, n, substream_seed(31, t, StreamRole::Matrix));
      const auto p = SecularProblem::from_split(without_last_row(m.entries), last_row(m.entries));
      const auto got = secular_spectrum(p);
      const auto want = oracle::singular_values(m.entries);
      REQUIRE(got.size() == n);
      for (std::size_t i = 0; i < n; ++i) CHECK(oracle::close(got[i], want[i], want[0], n, 1e-9));

      // interlacing with the poles
      std::vector<double> star = p.sigma_star;
      std::sort(star.rbegin(), star.rend());
      for (std::size_t i = 0; i + 1 < n; ++i) {
        CHECK(got[i + 1] <= star[i] * (1 + 1e-12) + 1e-300);
        CHECK(star[i] <= got[i] * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("planted zero inner products are deflated exactly") {
  Rng rng(404);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 5 + t % 20;
    SecularProblem p;
    double s = 0.1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      s += 0.05 + rng.uniform();
      p.sigma_star.push_back(s);
      p.inner.push_back(i % 3 == 1 ? 0.0 : rng.normal());
    }
    p.kernel_inner = rng.normal();
    const auto got = secular_spectrum(p);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (p.inner[i] != 0.0) continue;
      double best = 1.0;
      for (double g : got) best = std::min(best, std::abs(g - p.sigma_star[i]) / p.sigma_star[i]);
      CHECK(best <= 1e-12);
    }
  }
}

TEST_CASE("least root agrees with the smallest singular value") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const std::size_t n = 4 + t % 30;
    const auto m = sample_matrix(EntryDistribution::gaussian(), n, n, substream_seed(8, t, StreamRole::Matrix));
    const auto p = SecularProblem::from_split(without_last_row(m.entries), last_row(m.entries));
    const auto want = singular_values(m.entries);
    const auto r = secular_least(p, 0.5);
    CHECK(r.flag == SecularFlag::None);
    CHECK(std::abs(r.value - want.back()) <= 1e-14 * p.sigma_star.front() + 1e-12 * want.back());
  }
}

TEST_CASE("update implications") {
  const auto id = verify_update_implications(Matrix::Identity(5, 5), 0.5);
  CHECK_FALSE(id.skipped);
  CHECK_FALSE(id.antecedent);
  CHECK(id.both_ok());

  // [[1,0],[1,1]]: sigma_n = 0.618, sigma_1(A*) = 1. eps / sqrt2 = 0.7 needs
  // eps = 0.99; premise1 holds since 1 >= 0.99^{3/4} / sqrt2.
  Matrix a(2, 2);
  a << 1, 0, 1, 1;
  const auto r = verify_update_implications(a, 0.7 * std::sqrt(2.0));
  CHECK(r.premise1);
  CHECK(r.antecedent);
  CHECK(r.forward_ok);
  CHECK(r.converse_ok);
  CHECK(r.chi_full == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(verify_update_implications(a, 1.5), InputError);
  CHECK_THROWS_AS(verify_update_implications(a, 0.0), InputError);
  Matrix z = Matrix::Zero(4, 4);
  z(3, 3) = 1.0;
  CHECK(verify_update_implications(z, 0.5).skipped);

  for (double eps : {0.05, 0.5}) {
    int bad = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      const auto m = sample_matrix(EntryDistribution::gaussian(), 40, 40, substream_seed(3, t, StreamRole::Matrix));
      const auto rep = verify_update_implications(m.entries, eps);
      if (!rep.skipped && !rep.both_ok()) ++bad;
    }
    CHECK(bad == 0);
  }
}
