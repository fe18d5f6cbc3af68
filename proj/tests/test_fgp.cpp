#include <cmath>
#include <random>

#include "doctest.h"
#include "sptlab/error.hpp"
#include "sptlab/fgp.hpp"
#include "sptlab/policies.hpp"
#include "test_util.hpp"

using namespace sptlab;

namespace {

CovarianceEstimate cov(std::vector<std::vector<double>> rows) {
  CovarianceEstimate c{Matrix(rows.size(), rows.size()), 1};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) c.sigma(i, j) = rows[i][j];
  }
  return c;
}

CovarianceEstimate random_cov(std::mt19937_64& rng, std::size_t n) {
  return {testutil::random_psd(rng, n, n, 0.3), 1};
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("generated weights of the built-in functions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const WeightVector mu(testutil::random_simplex(rng, n));
    const auto same = fgp_weights(constant_generator(), mu);
    for (std::size_t k = 0; k < n; ++k) CHECK(same[k] == doctest::Approx(mu[k]).epsilon(1e-15));

    const auto eq = fgp_weights(geometric_mean_generator(), mu);
    for (double v : eq) CHECK(v == doctest::Approx(1.0 / n).epsilon(1e-12));

    const std::size_t i = trial % n, j = (trial + 1) % n;
    const auto gen = fgp_weights(swap_generator(i, j), mu);
    const auto direct = swap_weights(mu, i, j);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::fabs(gen[k] - direct[k]) <= 1e-12);
  }
}

TEST_CASE("finite differences agree with analytic derivatives") {
  std::mt19937_64 rng(32);
  for (const auto& s : {swap_generator(0, 2), geometric_mean_generator()}) {
    const auto numeric = GeneratingFunction::numeric(
        s.name(), [&s](std::span<const double> x) { return s.value(x); });
    CHECK_FALSE(numeric.is_analytic());
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = testutil::random_simplex(rng, 4);
      const auto ga = s.grad_log(x);
      const auto gn = numeric.grad_log(x);
      for (std::size_t k = 0; k < 4; ++k) {
        if (ga[k] == 0.0) {
          CHECK(std::fabs(gn[k]) <= 1e-6);
        } else {
          CHECK(rel_err(gn[k], ga[k]) <= 1e-6);
        }
      }
      const auto ha = s.hessian(x);
      const auto hn = numeric.hessian(x);
      double scale = 0.0;
      for (double v : ha.data()) scale = std::max(scale, std::fabs(v));
      for (std::size_t k = 0; k < 16; ++k) {
        CHECK(std::fabs(hn.data()[k] - ha.data()[k]) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("invalid generating functions are rejected") {
  const WeightVector mu(std::vector<double>{0.5, 0.5});
  const auto negative =
      GeneratingFunction::numeric("neg", [](std::span<const double>) { return -1.0; });
  CHECK_THROWS_AS(fgp_weights(negative, mu), Error);
  const auto nan = GeneratingFunction::numeric("nan", [](std::span<const double>) { return NAN; });
  try {
    fgp_weights(nan, mu);
    FAIL("expected an evaluation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Evaluation);
  }
}

TEST_CASE("drift increments") {
  const WeightVector half(std::vector<double>{0.5, 0.5});
  const double dt = 1.0 / 252, v = 0.09;
  CHECK(fgp_drift_increment(swap_generator(0, 1), half, cov({{0, 0}, {0, 0}}), dt) == 0.0);
  CHECK(fgp_drift_increment(constant_generator(), half, cov({{v, 0.01}, {0.01, v}}), dt) == 0.0);

  const auto anti = cov({{v, -v}, {-v, v}});
  CHECK(swap_drift_increment(half, 0, 1, anti, dt) == doctest::Approx(v * dt));
  CHECK(fgp_drift_increment(swap_generator(0, 1), half, anti, dt) == doctest::Approx(v * dt));
  CHECK(swap_drift_increment(half, 0, 1, cov({{v, 0}, {0, v}}), dt) == doctest::Approx(v / 2 * dt));
  CHECK(swap_drift_increment(half, 0, 1, cov({{v, v}, {v, v}}), dt) == 0.0);
  CHECK_THROWS_AS(swap_drift_increment(half, 1, 1, anti, dt), Error);
  CHECK_THROWS_AS(fgp_drift_increment(constant_generator(), half, cov({{1}}), dt), Error);
}

TEST_CASE("swap drift equals the generic drift formula") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const WeightVector mu(testutil::random_simplex(rng, n));
    const auto tau = random_cov(rng, n);
    const std::size_t i = trial % n, j = (trial + 1 + trial / n) % n;
    if (i == j) continue;
    const double dt = 1.0 / 12;
    const double special = swap_drift_increment(mu, i, j, tau, dt);
    const double generic = fgp_drift_increment(swap_generator(i, j), mu, tau, dt);
    CHECK(std::fabs(special - generic) <= 1e-12);
    CHECK(special >= 0.0);
  }
}

TEST_CASE("numeric Hessian drift matches the analytic one") {
  std::mt19937_64 rng(34);
  const auto s = swap_generator(0, 1);
  const auto numeric = GeneratingFunction::numeric(
      "swap-fd", [&s](std::span<const double> x) { return s.value(x); });
  for (int trial = 0; trial < 50; ++trial) {
    const WeightVector mu(testutil::random_simplex(rng, 3));
    const auto tau = random_cov(rng, 3);
    const double a = fgp_drift_increment(s, mu, tau, 1.0);
    const double b = fgp_drift_increment(numeric, mu, tau, 1.0);
    CHECK(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("swap drift accumulates monotonically") {
  std::mt19937_64 rng(35);
  DriftAccumulator acc;
  double last = 0.0;
  for (int step = 0; step < 500; ++step) {
    const WeightVector mu(testutil::random_simplex(rng, 3));
    acc.add(swap_drift_increment(mu, 0, 2, random_cov(rng, 3), 1.0 / 252), 1.0 / 252);
    CHECK(acc.theta() >= last);
    last = acc.theta();
  }
  CHECK(acc.elapsed() == doctest::Approx(500.0 / 252));
}
