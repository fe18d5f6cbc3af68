#pragma once
// First-order approximation of an observed market: collision (local-time)
// rates and gap variances of adjacent ranked log prices, the implied
// rank-based parameters, smoothing and rank-size curves.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sptlab/first_order.hpp"
#include "sptlab/market.hpp"

namespace sptlab {

struct FirstOrderEstimate {
  std::size_t n = 0;
  std::vector<double> lambda;   // n - 1 entries
  std::vector<double> gap_var;  // n - 1 entries
  std::vector<double> g;        // n entries, by rank
  std::vector<double> sigma;    // n entries, by rank
  double sample_span = 0.0;     // years
  std::vector<std::string> warnings;

  FirstOrderParams params() const { return {g, sigma}; }
};

// Both estimators need every asset present on every date of the panel and
// throw InsufficientData otherwise; restrict the window first.

// (1 / T) sum_t (d(log X_(k) - log X_(k+1)))^2, T in years.
std::vector<double> estimate_gap_variance(const PricePanel& panel);
// (2 / T) sum_t sum_{j<=k} [dlog X_(j)(t) - dlog X_{c_j(t)}(t)] where c_j(t)
// is the name holding rank j at the start of step t.
std::vector<double> estimate_local_time_rates(const PricePanel& panel);

// g_k = (lambda_{k-1} - lambda_k) / 2, sigma_k^2 = (v_{k-1} + v_k) / 4 with
// lambda_0 = lambda_n = 0, v_0 = v_1, v_n = v_{n-1}. Negative lambda are set
// to zero and reported in warnings. Needs n >= 2.
FirstOrderEstimate first_order_approximation(std::span<const double> lambda,
                                             std::span<const double> gap_var);
FirstOrderEstimate estimate_first_order(const PricePanel& panel);

// Gaussian smoothing with standard deviation `bandwidth` (in ranks), kernel
// truncated at four deviations, input mirrored about both ends
// (d c b a | a b c d | d c b a). Bandwidth 0 returns the input.
std::vector<double> reflected_gaussian_filter(std::span<const double> values, double bandwidth);

// Time average over dates of log X_(k)(t) - mean_j log X_(j)(t).
std::vector<double> rank_size_curve(const PricePanel& panel);
// Average of rank_size_curve over config.paths simulated paths.
std::vector<double> simulated_rank_size_curve(const FirstOrderParams& params,
                                              const SimConfig& config);

}  // namespace sptlab
