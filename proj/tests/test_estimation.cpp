#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sptlab/error.hpp"
#include "sptlab/estimation.hpp"

using namespace sptlab;

namespace {

PricePanel panel_from_rows(const std::vector<std::vector<double>>& log_rows, double dt) {
  const std::size_t n = log_rows.front().size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
  std::vector<int> dates(log_rows.size());
  std::iota(dates.begin(), dates.end(), 0);
  PricePanel p(names, dates, dt);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> s;
    for (const auto& row : log_rows) s.push_back(row[i]);
    p.set_log_series(i, 0, s);
  }
  return p;
}

std::vector<double> brute_force_filter(const std::vector<double>& x, double sigma) {
  const int n = static_cast<int>(x.size());
  const int radius = static_cast<int>(4.0 * sigma + 0.5);
  auto mirror = [n](int k) {
    const int period = 2 * n;
    k = ((k % period) + period) % period;
    return k < n ? k : period - 1 - k;
  };
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (int j = -radius; j <= radius; ++j)
    total += w[j + radius] = std::exp(-0.5 * j * j / (sigma * sigma));
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = -radius; j <= radius; ++j) out[k] += w[j + radius] / total * x[mirror(k + j)];
  }
  return out;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CAPTURE(k);
    CHECK(got[k] == doctest::Approx(want[k]).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("estimators on hand-built panels") {
  const auto still = panel_from_rows({{0.3, 0.1, -0.2}, {0.5, 0.2, -0.1}, {0.4, 0.3, 0.0}}, 0.5);
  for (double l : estimate_local_time_rates(still)) CHECK(l == 0.0);

  const auto constant_gaps = panel_from_rows({{1.0, 0.0}, {1.3, 0.3}, {0.9, -0.1}}, 1.0);
  for (double v : estimate_gap_variance(constant_gaps)) CHECK(v == doctest::Approx(0.0));

  const auto cross = panel_from_rows({{1.0, 0.0}, {0.5, 0.7}}, 1.0);
  CHECK(estimate_local_time_rates(cross)[0] == doctest::Approx(0.4));
  CHECK(estimate_gap_variance(cross)[0] == doctest::Approx(0.64));

  const auto single = panel_from_rows({{0.0}, {0.1}, {0.3}}, 1.0);
  CHECK(estimate_local_time_rates(single).empty());
  CHECK(estimate_gap_variance(single).empty());
}

TEST_CASE("ragged windows are refused") {
  PricePanel p({"a", "b"}, {0, 1, 2}, 1.0);
  p.set_log_series(0, 0, std::vector<double>{0.0, 0.1, 0.2});
  p.set_log_series(1, 1, std::vector<double>{0.0, 0.3});
  try {
    estimate_gap_variance(p);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  CHECK_THROWS_AS(estimate_local_time_rates(p), Error);
  CHECK(estimate_gap_variance(p.window(1, 2)).size() == 1);
}

TEST_CASE("first-order approximation conventions") {
  auto e = first_order_approximation(std::vector<double>{2}, std::vector<double>{2});
  CHECK(e.g == std::vector<double>{-1, 1});
  CHECK(e.sigma[0] == doctest::Approx(1.0));
  CHECK(e.sigma[1] == doctest::Approx(1.0));

  e = first_order_approximation(std::vector<double>{3, 3}, std::vector<double>{2, 2});
  CHECK(e.g[1] == 0.0);
  for (double s : e.sigma) CHECK(s == doctest::Approx(1.0));

  e = first_order_approximation(std::vector<double>{1, -0.5, 2}, std::vector<double>{1, 1, 1});
  CHECK(e.g == std::vector<double>{-0.5, 0.5, -1, 1});
  CHECK_FALSE(e.warnings.empty());

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.001, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 30;
    std::vector<double> lam(n - 1), var(n - 1);
    for (auto& x : lam) x = u(rng);
    for (auto& x : var) x = u(rng);
    const auto est = first_order_approximation(lam, var);
    const double total = std::accumulate(est.g.begin(), est.g.end(), 0.0);
    CHECK(std::fabs(total) < 1e-12);
    CHECK(validate_params(est.params()).empty());
    for (double s : est.sigma) CHECK(s > 0.0);
  }
}

TEST_CASE("reflected Gaussian filter") {
  std::vector<double> spike(11, 0.0);
  spike[5] = 1.0;
  check_close(reflected_gaussian_filter(spike, 1.0), brute_force_filter(spike, 1.0), 1e-14);
  check_close(reflected_gaussian_filter(spike, 1.0),
              {0, 0.00013383062461474175, 0.0044318616200312655, 0.053991127420704409,
               0.24197144565660073, 0.39894346935609776, 0.24197144565660073, 0.053991127420704409,
               0.0044318616200312655, 0.00013383062461474175, 0},
              1e-13);

  std::vector<double> ramp;
  for (int k = 0; k < 7; ++k) ramp.push_back(k * k);
  check_close(reflected_gaussian_filter(ramp, 2.5),
              {4.5751636403059335, 6.0570969295561801, 8.8630458517622532, 12.613999652548305,
               16.655565069010844, 20.114642947959496, 22.120485908856971},
              1e-13);

  std::vector<double> wave;
  for (int k = 0; k < 26; ++k) wave.push_back(std::sin(0.7 * k) + 0.05 * k);
  const std::vector<double> wave_smooth{
      0.40954613197057227, 0.40993375538900545, 0.41112847157922372, 0.41388941631613801,
      0.41917413278052573, 0.42794965441864191, 0.44101420839963829, 0.45886060744499862,
      0.48160436095250525, 0.50898168924023379, 0.54040513565015558, 0.57505255040673164,
      0.61196213419054013, 0.65011216068752631, 0.68847597264845817, 0.72605583425253351,
      0.76190804287430325, 0.79517302976805282, 0.82511784791771248, 0.85118751634666245,
      0.87305120668530145, 0.89062418112838027, 0.90404954015658368, 0.9136346751987936,
      0.91975208428736699, 0.92271951241388939};
  check_close(reflected_gaussian_filter(wave, 6.0), wave_smooth, 1e-13);
  check_close(reflected_gaussian_filter(wave, 6.0), brute_force_filter(wave, 6.0), 1e-13);

  check_close(reflected_gaussian_filter(std::vector<double>{1, -2, 5}, 4.0),
              {1.3330737548232559, 1.3333153617686411, 1.3336108834081037}, 1e-13);

  const std::vector<double> flat(9, 2.75);
  check_close(reflected_gaussian_filter(flat, 3.0), flat, 1e-15);
  CHECK(reflected_gaussian_filter(wave, 0.0) == wave);
  CHECK_THROWS_AS(reflected_gaussian_filter(std::vector<double>{}, 1.0), Error);
  CHECK_THROWS_AS(reflected_gaussian_filter(wave, -1.0), Error);
}

TEST_CASE("rank-size curves") {
  const auto flat = panel_from_rows({{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}}, 1.0);
  for (double v : rank_size_curve(flat)) CHECK(v == doctest::Approx(0.0));

  const auto one = panel_from_rows({{0.1, 0.7, 0.4}}, 1.0);
  const auto curve = rank_size_curve(one);
  CHECK(curve[0] == doctest::Approx(0.3));
  CHECK(curve[1] == doctest::Approx(0.0));
  CHECK(curve[2] == doctest::Approx(-0.3));

  const auto two = panel_from_rows({{0.1, 0.7, 0.4}, {1.0, 0.0, 0.2}}, 1.0);
  const auto avg = rank_size_curve(two);
  CHECK(avg[0] == doctest::Approx(0.5 * (0.3 + 0.6)));
  CHECK(avg[2] == doctest::Approx(0.5 * (-0.3 - 0.4)));
}

TEST_CASE("local-time rate of a simulated two-name market") {
  SimConfig c;
  c.steps = 200000;
  c.seed = 1;
  const auto panel = simulate({{-1, 1}, {1, 2}}, c);
  CHECK(estimate_local_time_rates(panel)[0] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gap variance of a simulated two-name market") {
  SimConfig c;
  c.steps = 200000;
  c.dt = 1.0 / 2520;
  c.seed = 1;
  const auto panel = simulate({{-1, 1}, {1, 2}}, c);
  CHECK(estimate_gap_variance(panel)[0] == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("local-time rates of a simulated Atlas market") {
  SimConfig c;
  c.steps = 200000;
  c.seed = 1;
  const FirstOrderParams atlas{{-5, -5, -5, -5, 20}, {2, 2, 2, 2, 2}};
  const auto lam = estimate_local_time_rates(simulate(atlas, c));
  const auto want = theoretical_local_times(atlas);
  for (std::size_t k = 0; k < lam.size(); ++k)
    CHECK(lam[k] == doctest::Approx(want[k]).epsilon(0.05));
}

TEST_CASE("round trip recovers interior parameters") {
  SimConfig c;
  c.steps = 200000;
  c.seed = 1;
  const FirstOrderParams truth{{-3, 2, 1}, {3, 3, 3}};
  const auto est = estimate_first_order(simulate(truth, c));
  CHECK(est.g[1] == doctest::Approx(truth.g[1]).epsilon(0.10));
  CHECK(est.sigma[1] == doctest::Approx(truth.sigma[1]).epsilon(0.10));
  CHECK(std::fabs(std::accumulate(est.g.begin(), est.g.end(), 0.0)) < 1e-12);
}
