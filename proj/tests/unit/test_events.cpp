#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsvlab/bump.hpp"
#include "lsvlab/ensemble.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/events.hpp"
#include "lsvlab/rng.hpp"
#include "lsvlab/spectra.hpp"
#include "oracles.hpp"

using namespace lsv;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Direct {
  bool r1, r2, r3, r4;
};

// The four regularity events straight from a Jacobi SVD of M*.
Direct direct_events(const Matrix& m) {
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd mstar = m.topRows(n - 1);
  const Eigen::VectorXd x = m.row(n - 1).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mstar, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double nd = static_cast<double>(n);
  const double L = std::max(1.0, std::log(std::log(nd)));
  auto sig = [&](Eigen::Index k) { return s(n - 1 - k); };              // sigma_{n-k}
  auto proj = [&](Eigen::Index k) { return svd.matrixV().col(n - 1 - k).dot(x); };
  Direct d{};
  d.r1 = sig(1) >= std::pow(std::log(nd), -3) / std::sqrt(nd);
  d.r2 = true;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (std::abs(proj(k)) > std::max(std::pow(double(k), 0.125), L)) d.r2 = false;
    if (k >= L && sig(k) < std::pow(double(k), 0.75) / std::sqrt(nd)) d.r2 = false;
  }
  const auto mi = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(L * L)), 1, n - 1);
  d.r3 = sig(mi) <= L * L * L / std::sqrt(nd);
  double sum = 0.0;
  for (Eigen::Index i = 1; i <= mi; ++i) sum += proj(i) * proj(i);
  d.r4 = sum >= L;
  return d;
}

TrialSetup setup(std::uint64_t trials, std::uint64_t seed = 1, unsigned workers = 1) {
  return TrialSetup{trials, seed, workers};
}
}  // namespace

TEST_CASE("loglog conventions") {
  CHECK(loglog_level(10) == 1.0);
  CHECK(loglog_level(16) == doctest::Approx(std::log(std::log(16.0))));
  CHECK(loglog_level(100000) == doctest::Approx(std::log(std::log(100000.0))));
  CHECK(loglog_square_index(16) == 1);
  CHECK(loglog_square_index(1000000) == 6);
}

TEST_CASE("orthogonal matrix profile") {
  Rng rng(2);
  const Matrix q = oracle::random_orthogonal(16, [&] { return rng.normal(); });
  const auto p = regularity_profile(q);
  CHECK(p.r1);
  CHECK_FALSE(p.skipped);
  CHECK(p.witnesses.sigma_from_bottom.front() == doctest::Approx(1.0));
}

TEST_CASE("zero row is handled") {
  Matrix m = sample_matrix(EntryDistribution::gaussian(), 20, 20, 3).entries;
  m.row(4).setZero();
  const auto p = regularity_profile(m);
  CHECK(p.skipped);
  CHECK_FALSE(p.r1);
  CHECK_FALSE(p.e_star);
  CHECK_FALSE(p.e_lcd);
  CHECK_THROWS_AS(regularity_profile(Matrix::Identity(8, 8)), InputError);
}

TEST_CASE("indicators match a direct computation and the witnesses") {
  EventParams params;
  params.lcd_cap = 200;
  for (std::uint64_t t = 0; t < 60; ++t) {
    const std::size_t n = 16 + 7 * (t % 6);
    const auto law = t % 2 ? EntryDistribution::rademacher() : EntryDistribution::gaussian();
    const auto m = sample_matrix(law, n, n, substream_seed(4, t, StreamRole::Matrix));
    const auto p = regularity_profile(m.entries, params);
    const auto d = direct_events(m.entries);
    CHECK(p.r1 == d.r1);
    CHECK(p.r2 == d.r2);
    CHECK(p.r3 == d.r3);
    CHECK(p.r4 == d.r4);
    const auto again = EventProfile::recompute(p.witnesses, params);
    CHECK(again.r1 == p.r1);
    CHECK(again.r2 == p.r2);
    CHECK(again.r3 == p.r3);
    CHECK(again.r4 == p.r4);
    CHECK(again.e_flat == p.e_flat);
    CHECK(again.e_lcd == p.e_lcd);
    CHECK(again.e_star == p.e_star);
    CHECK(p.e_r(loglog_level(n)) == p.r2);
    CHECK((!p.e_star || (p.r1 && p.e_flat && p.e_lcd && p.r3)));
    // E_r is monotone in r
    CHECK((!p.e_r(1.0) || p.e_r(3.0)));
  }
}

TEST_CASE("verdict rules") {
  const auto under = proportion_verdict("x", 5, 1000, 0.1, 0.0);
  CHECK(under.outcome == Outcome::Underpowered);
  const auto pass = proportion_verdict("x", 100, 1000, 0.1, 0.0);
  CHECK(pass.pass());
  const auto fail = proportion_verdict("x", 300, 1000, 0.1, 0.0);
  CHECK(fail.outcome == Outcome::Fail);
  CHECK(to_string(Outcome::Underpowered) == "underpowered");
}

TEST_CASE("small ball examples") {
  const auto rad = EntryDistribution::rademacher();
  Vector e1 = Vector::Zero(6);
  e1(0) = 1;
  const auto a = small_ball_test(e1, rad, {0.5}, setup(2000));
  CHECK(a.cells[0].estimate == 0.0);
  CHECK(a.cells[0].count == 0);

  Vector h = Vector::Zero(2);
  h << 1, 1;
  h /= std::sqrt(2.0);
  const auto b = small_ball_test(h, rad, {0.1}, setup(20000));
  CHECK(oracle::rademacher_small_ball(h, 0.1) == 0.5);
  CHECK(b.cells[0].ci_low <= 0.5);
  CHECK(b.cells[0].ci_high >= 0.5);

  // a 12-coordinate vector: enumeration oracle over 4096 sign patterns
  Rng rng(9);
  Vector v(12);
  for (auto& x : v) x = rng.normal();
  v /= v.norm();
  const auto c = small_ball_test(v, rad, {0.1, 0.3}, setup(50000));
  for (std::size_t i = 0; i < 2; ++i) {
    const double exact = oracle::rademacher_small_ball(v, c.cells[i].param_a);
    CHECK(c.cells[i].ci_low <= exact);
    CHECK(c.cells[i].ci_high >= exact);
  }
  // v -> -v leaves a symmetric law unchanged
  const auto neg = small_ball_test(-v, rad, {0.1, 0.3}, setup(50000, 2));
  for (std::size_t i = 0; i < 2; ++i) CHECK(overlap_with_slack({c.cells[i].ci_low, c.cells[i].ci_high},
                                                               {neg.cells[i].ci_low, neg.cells[i].ci_high}, 1.0));
}

TEST_CASE("small ball of a gaussian kernel vector") {
  const auto m = sample_matrix(EntryDistribution::gaussian(), 49, 50, 21);
  const Vector v = kernel_vector(m.entries);
  const auto r = small_ball_test(v, EntryDistribution::gaussian(), {0.05}, setup(40000));
  const double ratio = r.cells[0].estimate / 0.05;
  CHECK(ratio >= 0.5);
  CHECK(ratio <= 2.0);
  CHECK(r.pass);
}

TEST_CASE("decoupling") {
  const auto m = sample_matrix(EntryDistribution::gaussian(), 39, 40, 5);
  const auto s = smallest_singular_pairs(m.entries, 1);
  const Vector& u = *s.kernel_vector;
  const Vector& w = s.smallest_vectors[0];
  const auto rad = EntryDistribution::rademacher();
  const auto r = decoupling_test(u, w, 0.3, {0, 1, 2}, rad, setup(40000));
  CHECK(r.orthogonal);
  // t = 0: roughly half the small ball
  CHECK(r.cells[0].estimate == doctest::Approx(0.5 * r.small_ball.estimate).epsilon(0.15));
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    CHECK(r.cells[i].count <= r.small_ball.count);
    CHECK(r.cells[i].count <= r.tails[i].count);
  }
  CHECK(r.strictly_decreasing);

  const auto inf = decoupling_test(u, w, kInf, {0, 1, 2}, EntryDistribution::gaussian(), setup(20000));
  for (std::size_t i = 0; i < 3; ++i) CHECK(inf.cells[i].count == inf.tails[i].count);
  CHECK(inf.strictly_decreasing);

  CHECK_THROWS_AS(decoupling_test(u, u, 0.3, {0}, rad, setup(1000)), InputError);
  const auto waived = decoupling_test(u, u, 0.3, {0}, rad, setup(1000), true);
  CHECK_FALSE(waived.orthogonal);
}

TEST_CASE("negative dependence") {
  const std::size_t n = 30;
  const auto m = sample_matrix(EntryDistribution::gaussian(), n - 1, n, 6);
  const auto s = smallest_singular_pairs(m.entries, 9);
  Matrix w(n, 9);
  for (int j = 0; j < 9; ++j) w.col(j) = s.smallest_vectors[j];
  const Vector& u = *s.kernel_vector;
  const auto gauss = EntryDistribution::gaussian();

  // k = 1 with Gaussian entries factorizes
  const auto one = negative_dependence_test(u, w.leftCols(1), 0.2, 0.5, gauss, setup(100000));
  const double sb = std::erf(0.2 / std::sqrt(2.0));
  const double chi = std::erf(std::sqrt(0.5) / std::sqrt(2.0));
  CHECK(one.verdict.ci_low <= sb * chi);
  CHECK(one.verdict.ci_high >= sb * chi);
  CHECK(one.precondition_value > 0.0);

  // c_small = infinity gives back the small ball on the same sample
  const auto vac = negative_dependence_test(u, w.leftCols(4), 0.2, kInf, gauss, setup(20000, 3));
  const auto ball = small_ball_test(u, gauss, {0.2}, setup(20000, 3));
  CHECK(vac.verdict.count == ball.cells[0].count);

  const auto sweep = negative_dependence_sweep(u, w, 0.2, 0.5, {1, 4, 9}, gauss, setup(20000));
  CHECK(sweep.cells.size() == 3);
  const auto ball1 = small_ball_test(u, gauss, {0.2}, setup(20000));
  for (const auto& cell : sweep.cells) CHECK(cell.verdict.count <= ball1.cells[0].count);

  Matrix notorth = w.leftCols(2);
  notorth.col(1) = notorth.col(0);
  CHECK_THROWS_AS(negative_dependence_test(u, notorth, 0.2, 0.5, gauss, setup(1000)), InputError);
}

TEST_CASE("sigma tails") {
  const auto r = sigma_tail_tests(EntryDistribution::gaussian(), 24, {1, 2, 23}, {1, 10}, 0.01, setup(2000));
  REQUIRE(r.lower.size() == 3);
  CHECK(r.lower[2].count == 0);
  REQUIRE(r.upper.size() == 6);
  CHECK(r.upper[1].count == 0);  // k = 1, t = 10
  CHECK(r.upper[3].count == 0);  // k = 2, t = 10
  CHECK(r.skipped == 0);
  // counts are monotone in c on the same sample
  const auto wider = sigma_tail_tests(EntryDistribution::gaussian(), 24, {1, 2}, {1}, 0.2, setup(2000));
  CHECK(wider.lower[0].count >= r.lower[0].count);
  CHECK(wider.lower[1].count >= r.lower[1].count);
  CHECK_THROWS_AS(sigma_tail_tests(EntryDistribution::gaussian(), 24, {24}, {1}, 0.1, setup(100)), InputError);
}

TEST_CASE("lindeberg exchange") {
  Vector u = Vector::Ones(20) / std::sqrt(20.0);
  const auto gauss = EntryDistribution::gaussian();
  const auto same = lindeberg_gap_test({u}, gauss, bump_test_function(), setup(20000));
  CHECK(std::abs(same[0].mean_gap) <= 3 * same[0].halfwidth);
  CHECK(same[0].verdict.pass());

  const auto lin = lindeberg_gap_test({u}, EntryDistribution::rademacher(), linear_test_function(), setup(20000));
  CHECK(lin[0].verdict.bound_value == 0.0);
  CHECK(std::abs(lin[0].mean_gap) <= 3 * lin[0].halfwidth);
  CHECK(lin[0].verdict.pass());

  CHECK(lin[0].cube_sum == doctest::Approx(20 * std::pow(20.0, -1.5)));
  ScalarTestFunction bare{"bare", [](double x) { return x * x; }, std::nullopt};
  CHECK_THROWS_AS(lindeberg_gap_test({u}, gauss, bare, setup(100)), UnsupportedError);

  const auto f = bump_test_function(4.0);
  REQUIRE(f.third_derivative_bound);
  CHECK(*f.third_derivative_bound == doctest::Approx(psi_third_derivative_bound() / 64.0));
  CHECK(f.f(0.0) == doctest::Approx(psi(0.0)));
}

TEST_CASE("tests are independent of the worker count") {
  Vector v = Vector::Ones(10) / std::sqrt(10.0);
  const auto a = small_ball_test(v, EntryDistribution::rademacher(), {0.1, 0.5}, setup(3000, 7, 1));
  const auto b = small_ball_test(v, EntryDistribution::rademacher(), {0.1, 0.5}, setup(3000, 7, 4));
  CHECK(a.cells[0].count == b.cells[0].count);
  CHECK(a.cells[1].count == b.cells[1].count);
  const auto l1 = lindeberg_gap_test({v}, EntryDistribution::rademacher(), bump_test_function(), setup(3000, 7, 1));
  const auto l4 = lindeberg_gap_test({v}, EntryDistribution::rademacher(), bump_test_function(), setup(3000, 7, 4));
  CHECK(l1[0].mean_gap == l4[0].mean_gap);
}
