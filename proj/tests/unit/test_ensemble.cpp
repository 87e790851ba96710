#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lsvlab/ensemble.hpp"
#include "lsvlab/errors.hpp"
#include "lsvlab/parallel.hpp"
#include "lsvlab/rng.hpp"

using namespace lsv;

TEST_CASE("rademacher entries are signs") {
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = sample_entry(EntryDistribution::rademacher(), r);
    CHECK((x == 1.0 || x == -1.0));
  }
  const auto m = sample_matrix(EntryDistribution::rademacher(), 3, 2, 5);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) CHECK(std::abs(m.entries(i, j)) == 1.0);
}

TEST_CASE("discrete law with variance 1/2 is rejected") {
  CHECK_THROWS_AS(EntryDistribution::discrete({-1, 0, 1}, {0.25, 0.5, 0.25}), InputError);
  CHECK_THROWS_AS(EntryDistribution::discrete({-1, 1}, {0.3, 0.7}), InputError);
  CHECK_THROWS_AS(EntryDistribution::discrete({-1, 1}, {0.5, 0.6}), InputError);
  CHECK_NOTHROW(EntryDistribution::discrete({-std::sqrt(2.0), 0, std::sqrt(2.0)}, {0.25, 0.5, 0.25}));
}

TEST_CASE("sampling is reproducible") {
  Rng a(99), b(99);
  CHECK(sample_entry(EntryDistribution::gaussian(), a) == sample_entry(EntryDistribution::gaussian(), b));
  const auto m1 = sample_matrix(EntryDistribution::rademacher(), 2, 2, 7);
  const auto m2 = sample_matrix(EntryDistribution::rademacher(), 2, 2, 7);
  CHECK(m1.entries == m2.entries);
  CHECK(m1.seed == 7);
  const auto g1 = sample_matrix(EntryDistribution::uniform(), 5, 9, 123);
  const auto g2 = sample_matrix(EntryDistribution::uniform(), 5, 9, 123);
  CHECK(g1.entries == g2.entries);
}

TEST_CASE("sample_matrix errors") {
  CHECK_THROWS_AS(sample_matrix(EntryDistribution::gaussian(), 0, 3, 1), InputError);
  CHECK_THROWS_AS(sample_matrix(EntryDistribution::gaussian(), 100, 100, 1, 5000), SizingError);
}

TEST_CASE("psi2 closed forms") {
  CHECK(psi2_estimate(EntryDistribution::rademacher(), 8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi2_estimate(EntryDistribution::gaussian(), 2) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
  // E|xi|^p = 2^{p/2} / 2 for the three-point law; enumerate p = 1..4 here.
  const auto d = EntryDistribution::discrete({-std::sqrt(2.0), 0, std::sqrt(2.0)}, {0.25, 0.5, 0.25});
  double want = 0.0;
  for (int p = 1; p <= 4; ++p) {
    const double moment = 0.5 * std::pow(std::sqrt(2.0), p);
    want = std::max(want, std::pow(moment, 1.0 / p) / std::sqrt(static_cast<double>(p)));
  }
  CHECK(psi2_estimate(d, 4) == doctest::Approx(want).epsilon(1e-14));
  for (const auto& law : {EntryDistribution::rademacher(), EntryDistribution::gaussian(),
                          EntryDistribution::uniform(), d}) {
    CHECK(std::isfinite(law.psi2()));
    CHECK(law.psi2() >= 0.5);
  }
}

TEST_CASE("empirical moments of the built-in laws") {
  const std::uint64_t n = 1'000'000;
  for (const auto& law : {EntryDistribution::rademacher(), EntryDistribution::gaussian(),
                          EntryDistribution::uniform(),
                          EntryDistribution::discrete({-std::sqrt(2.0), 0, std::sqrt(2.0)},
                                                      {0.25, 0.5, 0.25})}) {
    Rng r(20240501);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = sample_entry(law, r);
      s += x;
      s2 += x * x;
    }
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(s / n) <= tol * law.psi2());
    CHECK(std::abs(s2 / n - 1.0) <= tol * law.psi2() * law.psi2());
  }
}

TEST_CASE("gaussian 1000x1000 entry mean") {
  // sd of the mean is 1e-3; 4 sd keeps the false alarm rate near 6e-5.
  const auto m = sample_matrix(EntryDistribution::gaussian(), 1000, 1000, 42);
  CHECK(std::abs(m.entries.mean()) <= 4e-3);
}

TEST_CASE("characteristic functions and moments") {
  CHECK(EntryDistribution::rademacher().char_fn(0.3) == doctest::Approx(std::cos(0.3)));
  CHECK(EntryDistribution::gaussian().char_fn(1.0) == doctest::Approx(std::exp(-0.5)));
  const double a = std::sqrt(3.0);
  CHECK(EntryDistribution::uniform().char_fn(0.7) == doctest::Approx(std::sin(a * 0.7) / (a * 0.7)));
  CHECK(EntryDistribution::uniform().abs_moment(2) == doctest::Approx(1.0));
  CHECK(EntryDistribution::gaussian().abs_moment(3) == doctest::Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)));
}

TEST_CASE("distribution parsing") {
  CHECK(EntryDistribution::parse("rademacher") == EntryDistribution::rademacher());
  CHECK(EntryDistribution::parse("gaussian") == EntryDistribution::gaussian());
  const auto d = EntryDistribution::parse(
      R"({"kind":"discrete","support":[-1,1],"probs":[0.5,0.5]})");
  CHECK(d.kind() == DistKind::DiscreteSymmetric);
  CHECK(EntryDistribution::from_json(d.to_json()) == d);
  CHECK_THROWS(EntryDistribution::parse("cauchy"));
}

TEST_CASE("substreams are independent of scheduling") {
  auto draw = [](unsigned workers) {
    return run_trials<std::vector<double>>(
        1000, workers, {},
        [](std::uint64_t t, std::vector<double>& acc) {
          const auto m = sample_matrix(EntryDistribution::gaussian(), 3, 3,
                                       substream_seed(5, t, StreamRole::Matrix));
          acc.push_back(m.entries(1, 2));
        },
        [](std::vector<double>& acc, const std::vector<double>& b) {
          acc.insert(acc.end(), b.begin(), b.end());
        });
  };
  const auto one = draw(1);
  CHECK(one.size() == 1000);
  CHECK(one == draw(3));
  CHECK(one == draw(8));
  CHECK(substream_seed(1, 2, StreamRole::Matrix) != substream_seed(1, 2, StreamRole::Vector));
}
