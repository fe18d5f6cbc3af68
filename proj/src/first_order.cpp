#include "sptlab/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"
#include "sptlab/rng.hpp"

namespace sptlab {

std::vector<std::string> validate_params(const FirstOrderParams& p) {
  std::vector<std::string> issues;
  char buf[160];
  if (p.g.empty()) issues.emplace_back("at least one rank is required");
  if (p.g.size() != p.sigma.size()) {
    issues.emplace_back("g and sigma must have the same length");
    return issues;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < p.g.size(); ++k) {
    if (!std::isfinite(p.g[k])) {
      std::snprintf(buf, sizeof buf, "g_%zu is not finite", k + 1);
      issues.emplace_back(buf);
    }
    if (!(p.sigma[k] > 0.0) || !std::isfinite(p.sigma[k])) {
      std::snprintf(buf, sizeof buf, "sigma_%zu = %g must be positive", k + 1, p.sigma[k]);
      issues.emplace_back(buf);
    }
    total += p.g[k];
    if (k + 1 < p.g.size() && !(total < 0.0)) {
      std::snprintf(buf, sizeof buf, "partial sum g_1 + ... + g_%zu = %g must be negative", k + 1,
                    total);
      issues.emplace_back(buf);
    }
  }
  if (!(std::fabs(total) <= 1e-10)) {
    std::snprintf(buf, sizeof buf, "sum of g = %g must be zero", total);
    issues.emplace_back(buf);
  }
  return issues;
}

void require_valid(const FirstOrderParams& params) {
  const auto issues = validate_params(params);
  if (issues.empty()) return;
  std::string msg = "invalid first-order parameters:";
  for (const auto& s : issues) msg += "\n  " + s;
  fail(ErrorKind::ConstraintViolation, msg);
}

PricePanel simulate(const FirstOrderParams& params, const SimConfig& config, std::size_t path) {
  require_valid(params);
  require(config.steps >= 1, ErrorKind::InvalidInput, "simulate: steps must be at least 1");
  require(config.dt > 0.0 && std::isfinite(config.dt), ErrorKind::InvalidInput,
          "simulate: dt must be positive");
  require(config.brownian_substeps >= 1, ErrorKind::InvalidInput,
          "simulate: brownian_substeps must be at least 1");
  const std::size_t n = params.n();
  std::vector<double> x = config.initial_log_prices;
  if (x.empty()) x.assign(n, 0.0);
  require(x.size() == n, ErrorKind::InvalidInput,
          "simulate: initial_log_prices must have one entry per asset");

  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "X" + std::to_string(i + 1);
  std::vector<int> dates(config.steps + 1);
  for (std::size_t t = 0; t <= config.steps; ++t) dates[t] = static_cast<int>(t);

  std::vector<double> series(n * (config.steps + 1));
  const NormalStream rng(config.seed, path);
  const std::size_t r = config.brownian_substeps;
  const double inv_sqrt_r = 1.0 / std::sqrt(static_cast<double>(r));
  std::vector<double> drift(n), vol(n), noise(n), fine(n);

  for (std::size_t t = 0;; ++t) {
    for (std::size_t i = 0; i < n; ++i) series[i * (config.steps + 1) + t] = x[i];
    if (t == config.steps) break;
    const RankState ranks = rank_values(x);
    for (std::size_t i = 0; i < n; ++i) {
      drift[i] = params.g[ranks.rank_of[i]];
      vol[i] = params.sigma[ranks.rank_of[i]];
    }
    if (r == 1) {
      rng.fill(t, noise);
    } else {
      std::fill(noise.begin(), noise.end(), 0.0);
      for (std::size_t s = 0; s < r; ++s) {
        rng.fill(t * r + s, fine);
        for (std::size_t i = 0; i < n; ++i) noise[i] += fine[i];
      }
      for (double& z : noise) z *= inv_sqrt_r;
    }
    kernels::euler_step(x, drift, vol, noise, config.dt);
  }

  PricePanel panel(std::move(names), std::move(dates), config.dt);
  for (std::size_t i = 0; i < n; ++i) {
    panel.set_log_series(
        i, 0, std::span<const double>(series).subspan(i * (config.steps + 1), config.steps + 1));
  }
  return panel;
}

std::vector<double> theoretical_local_times(const FirstOrderParams& params) {
  std::vector<double> out;
  double partial = 0.0;
  for (std::size_t k = 0; k + 1 < params.n(); ++k) {
    partial += params.g[k];
    out.push_back(-2.0 * partial);
  }
  return out;
}

std::vector<double> theoretical_gap_variances(const FirstOrderParams& params) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < params.sigma.size(); ++k) {
    out.push_back(params.sigma[k] * params.sigma[k] + params.sigma[k + 1] * params.sigma[k + 1]);
  }
  return out;
}

double portfolio_growth_rate(const FirstOrderParams& params, std::span<const double> pi_by_rank,
                             double gamma_star) {
  require(pi_by_rank.size() == params.n(), ErrorKind::InvalidInput,
          "portfolio_growth_rate: dimension mismatch");
  return kernels::dot(pi_by_rank, params.g) + gamma_star;
}

}  // namespace sptlab
