#pragma once
// Rank-based (first-order) market models: parameters, Euler-Maruyama
// simulation and closed-form asymptotics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sptlab/market.hpp"

namespace sptlab {

// Growth rates g and volatilities sigma indexed by rank (0 = largest).
struct FirstOrderParams {
  std::vector<double> g;
  std::vector<double> sigma;

  std::size_t n() const { return g.size(); }
};

// Empty when the parameters are admissible; otherwise one message per
// broken condition.
std::vector<std::string> validate_params(const FirstOrderParams& params);
// Throws ConstraintViolation with the joined report.
void require_valid(const FirstOrderParams& params);

struct SimConfig {
  std::size_t steps = 1000;
  double dt = 1.0 / 252.0;
  std::uint64_t seed = 1;
  // Empty means all zeros.
  std::vector<double> initial_log_prices;
  std::size_t paths = 1;
  // Each step's Brownian increment is the sum of this many finer normal
  // draws, so runs whose dt differ by this factor share one Brownian path.
  std::size_t brownian_substeps = 1;
};

// One path of log prices on dates 0..steps. Ranks are recomputed at the
// start of every step and held fixed within it.
PricePanel simulate(const FirstOrderParams& params, const SimConfig& config, std::size_t path = 0);

// Runs config.paths independent paths concurrently and returns
// fn(path_index, panel) for each, in path order.
template <class Fn>
auto simulate_paths(const FirstOrderParams& params, const SimConfig& config, Fn&& fn);

// lambda_k = -2 (g_1 + ... + g_k), k = 1..n-1
std::vector<double> theoretical_local_times(const FirstOrderParams& params);
// sigma_k^2 + sigma_{k+1}^2
std::vector<double> theoretical_gap_variances(const FirstOrderParams& params);
// sum_k pi_(k) g_k + gamma*
double portfolio_growth_rate(const FirstOrderParams& params, std::span<const double> pi_by_rank,
                             double gamma_star);

}  // namespace sptlab

#include "sptlab/parallel.hpp"

namespace sptlab {

template <class Fn>
auto simulate_paths(const FirstOrderParams& params, const SimConfig& config, Fn&& fn) {
  using Result = decltype(fn(std::size_t{}, std::declval<const PricePanel&>()));
  std::vector<Result> out(config.paths);
  parallel_for(config.paths, [&](std::size_t p) { out[p] = fn(p, simulate(params, config, p)); });
  return out;
}

}  // namespace sptlab
