#include "sptlab/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sptlab/error.hpp"

namespace sptlab {
namespace {

void require_fixed_n(const PricePanel& panel, const char* what) {
  require(panel.num_dates() >= 2, ErrorKind::InsufficientData,
          std::string(what) + ": need at least two dates");
  require(panel.fixed_n(0, panel.num_dates() - 1), ErrorKind::InsufficientData,
          std::string(what) +
              ": assets enter during the window; restrict dates to a fixed set of assets");
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), [](double a, double b) { return a > b; });
  return v;
}

}  // namespace

std::vector<double> estimate_gap_variance(const PricePanel& panel) {
  require_fixed_n(panel, "estimate_gap_variance");
  const std::size_t n = panel.num_assets();
  const std::size_t steps = panel.num_dates() - 1;
  std::vector<double> out(n > 0 ? n - 1 : 0, 0.0);
  auto prev = sorted_desc(panel.log_prices_at(0));
  for (std::size_t t = 0; t < steps; ++t) {
    auto next = sorted_desc(panel.log_prices_at(t + 1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double d = (next[k] - next[k + 1]) - (prev[k] - prev[k + 1]);
      out[k] += d * d;
    }
    prev = std::move(next);
  }
  const double span = static_cast<double>(steps) * panel.dt();
  for (double& v : out) v /= span;
  return out;
}

std::vector<double> estimate_local_time_rates(const PricePanel& panel) {
  require_fixed_n(panel, "estimate_local_time_rates");
  const std::size_t n = panel.num_assets();
  const std::size_t steps = panel.num_dates() - 1;
  std::vector<double> out(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> cur = panel.log_prices_at(0);
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> next = panel.log_prices_at(t + 1);
    const RankState before = rank_values(cur);
    const auto ranked_now = sorted_desc(cur);
    const auto ranked_next = sorted_desc(next);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t name = before.name_at[k];
      acc += (ranked_next[k] - ranked_now[k]) - (next[name] - cur[name]);
      out[k] += acc;
    }
    cur = std::move(next);
  }
  const double span = static_cast<double>(steps) * panel.dt();
  for (double& v : out) v *= 2.0 / span;
  return out;
}

FirstOrderEstimate first_order_approximation(std::span<const double> lambda,
                                             std::span<const double> gap_var) {
  require(!lambda.empty(), ErrorKind::InsufficientData,
          "first_order_approximation: need at least two ranks");
  require(lambda.size() == gap_var.size(), ErrorKind::InvalidInput,
          "first_order_approximation: lambda and gap_var lengths differ");
  const std::size_t n = lambda.size() + 1;
  FirstOrderEstimate e;
  e.n = n;
  e.lambda.assign(lambda.begin(), lambda.end());
  e.gap_var.assign(gap_var.begin(), gap_var.end());

  std::vector<double> lam(n + 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    require(std::isfinite(lambda[k]) && std::isfinite(gap_var[k]), ErrorKind::InvalidInput,
            "first_order_approximation: non-finite input");
    require(gap_var[k] >= 0.0, ErrorKind::InvalidInput,
            "first_order_approximation: negative gap variance");
    lam[k + 1] = lambda[k];
    if (lambda[k] < 0.0) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "lambda_%zu,%zu = %g is negative; set to 0", k + 1, k + 2,
                    lambda[k]);
      e.warnings.emplace_back(buf);
      lam[k + 1] = 0.0;
    }
  }
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) v[k + 1] = gap_var[k];
  v[0] = v[1];
  v[n] = v[n - 1];

  e.g.resize(n);
  e.sigma.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    e.g[k - 1] = 0.5 * lam[k - 1] - 0.5 * lam[k];
    e.sigma[k - 1] = std::sqrt(0.25 * (v[k - 1] + v[k]));
  }
  return e;
}

FirstOrderEstimate estimate_first_order(const PricePanel& panel) {
  const auto lambda = estimate_local_time_rates(panel);
  const auto gap = estimate_gap_variance(panel);
  FirstOrderEstimate e = first_order_approximation(lambda, gap);
  e.sample_span = static_cast<double>(panel.num_dates() - 1) * panel.dt();
  return e;
}

std::vector<double> reflected_gaussian_filter(std::span<const double> values, double bandwidth) {
  require(!values.empty(), ErrorKind::InvalidInput, "reflected_gaussian_filter: empty input");
  require(bandwidth >= 0.0 && std::isfinite(bandwidth), ErrorKind::InvalidInput,
          "reflected_gaussian_filter: bandwidth must be non-negative");
  std::vector<double> out(values.begin(), values.end());
  if (bandwidth == 0.0) return out;

  const auto radius = static_cast<long>(4.0 * bandwidth + 0.5);
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (long j = -radius; j <= radius; ++j) {
    const double z = static_cast<double>(j) / bandwidth;
    w[j + radius] = std::exp(-0.5 * z * z);
    total += w[j + radius];
  }
  for (double& x : w) x /= total;

  const long n = static_cast<long>(values.size());
  auto mirror = [n](long i) {
    const long period = 2 * n;
    long m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
  };
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (long j = -radius; j <= radius; ++j) s += w[j + radius] * values[mirror(i + j)];
    out[i] = s;
  }
  return out;
}

std::vector<double> rank_size_curve(const PricePanel& panel) {
  require(panel.num_dates() >= 1, ErrorKind::InsufficientData, "rank_size_curve: empty panel");
  require(panel.fixed_n(0, panel.num_dates() - 1), ErrorKind::InsufficientData,
          "rank_size_curve: assets enter during the window; restrict dates");
  const std::size_t n = panel.num_assets();
  std::vector<double> curve(n, 0.0);
  for (std::size_t t = 0; t < panel.num_dates(); ++t) {
    const auto ranked = sorted_desc(panel.log_prices_at(t));
    double mean = 0.0;
    for (double v : ranked) mean += v;
    mean /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) curve[k] += ranked[k] - mean;
  }
  for (double& v : curve) v /= static_cast<double>(panel.num_dates());
  return curve;
}

std::vector<double> simulated_rank_size_curve(const FirstOrderParams& params,
                                              const SimConfig& config) {
  require(config.paths >= 1, ErrorKind::InvalidInput, "simulated_rank_size_curve: no paths");
  const auto curves = simulate_paths(
      params, config, [](std::size_t, const PricePanel& p) { return rank_size_curve(p); });
  std::vector<double> mean(params.n(), 0.0);
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += c[k];
  }
  for (double& v : mean) v /= static_cast<double>(curves.size());
  return mean;
}

}  // namespace sptlab
