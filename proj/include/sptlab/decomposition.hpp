#pragma once
// Sampled-path versions of the log-return identities.
//
// Paths are row-per-date matrices. A weight path pi with T rows pairs with a
// T x n matrix of increments; a market-weight path mu has one more row than
// the number of periods.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sptlab/market.hpp"

namespace sptlab {

// 1/2 (sum_i pi_i sigma_ii - pi' sigma pi)
double excess_growth_rate(std::span<const double> pi, const CovarianceEstimate& sigma);
double excess_growth_rate(const WeightVector& pi, const CovarianceEstimate& sigma);
// gamma* dt for one period from its log increments: 1/2 (sum pi a^2 - (sum pi a)^2).
// Adding a constant to every increment leaves it unchanged, so price and
// market-weight increments give the same value.
double excess_growth_step(std::span<const double> pi, std::span<const double> increments);

// sum_t [sum_i pi_i(t) r_i(t) + gamma*(t) dt]
double portfolio_log_return(const Matrix& pi_path, const Matrix& log_returns,
                            std::span<const double> gamma_star, double dt);
// sum_t [sum_i pi_i(t) dlog mu_i(t) + gamma*(t) dt]; mu_path has T + 1 rows.
double relative_log_return(const Matrix& pi_path, const Matrix& mu_path,
                           std::span<const double> gamma_star, double dt);
double market_identity_residual(const Matrix& mu_path, std::span<const double> gamma_star_mu,
                                double dt);

double stratonovich_integral(std::span<const double> y, std::span<const double> x);
double ito_integral(std::span<const double> y, std::span<const double> x);
double cross_variation(std::span<const double> y, std::span<const double> x);

struct ReturnDecomposition {
  double relative = 0.0;
  double structural = 0.0;
  double trading = 0.0;
  // gamma* integral from per-period realized increments
  double excess_growth_integral = 0.0;
  // -1/2 sum_i [pi_i, log mu_i] + excess_growth_integral
  double trading_crossvar = 0.0;
  double discrepancy = 0.0;

  // Running values, one entry per date, starting at zero.
  std::vector<double> relative_cum;
  std::vector<double> structural_cum;
  std::vector<double> trading_cum;
  std::vector<double> gamma_star_cum;
};

// pi_path and mu_path both have T + 1 rows (weights at every date). The
// relative return uses the exact discrete wealth ratio
//   log sum_i pi_i(t) mu_i(t+1) / mu_i(t)
// and the structural part is the midpoint sum of pi against log mu.
ReturnDecomposition decompose(const Matrix& pi_path, const Matrix& mu_path, double dt);

// gamma* per period (1/year) from a trailing realized covariance over up to
// `window` periods ending at that period.
std::vector<double> gamma_star_rolling(const Matrix& pi_path, const Matrix& log_increments,
                                       double dt, std::size_t window = 1);
// gamma* per period (1/year) as the residual dlog Z - sum_i pi_i dlog X_i.
std::vector<double> gamma_star_residual(std::span<const double> log_wealth_increments,
                                        const Matrix& pi_path, const Matrix& log_increments,
                                        double dt);

void write_decomposition_csv(std::ostream& out, std::span<const std::string> dates,
                             const ReturnDecomposition& d);

}  // namespace sptlab
