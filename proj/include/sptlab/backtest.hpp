#pragma once
// Periodic-rebalance backtests of weight policies on a price panel.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sptlab/market.hpp"
#include "sptlab/panel_io.hpp"
#include "sptlab/policies.hpp"

namespace sptlab {

struct BacktestOptions {
  // First rebalance date index; the last period ends at `end` (default: the
  // panel's last date).
  std::size_t start = 0;
  std::optional<std::size_t> end;
  // Per-asset first month in which the asset may be held; empty means every
  // available asset may be held.
  std::vector<int> inclusion_month;
  // (dates - 1) x assets carry per period; NaN drops the asset for that
  // period. Null means zero carry.
  const Matrix* carry = nullptr;
  DateFormat labels = DateFormat::Month;
};

struct PolicySeries {
  std::string name;
  std::vector<double> log_returns;    // one per period
  std::vector<double> gamma_star_dt;  // dlog Z - sum pi (dlog X + C)
  std::vector<double> carry;          // sum pi C
  std::vector<double> price_return;   // sum pi dlog X
  // Running totals, one entry per date, starting at zero.
  std::vector<double> cumulative;
  std::vector<double> relative_cumulative;
  std::vector<double> gamma_star_cum;
  std::vector<double> carry_cum;
  double annual_mean = 0.0;
  double annual_std = 0.0;
  std::optional<double> sharpe;
};

struct BacktestReport {
  std::vector<int> dates;  // period boundaries
  double periods_per_year = 12.0;
  DateFormat labels = DateFormat::Month;
  std::vector<PolicySeries> policies;
  std::vector<double> market_log_returns;
};

BacktestReport run_backtest(const PricePanel& panel, const std::vector<WeightPolicy>& policies,
                            const BacktestOptions& options = {});

// Annualized mean over annualized sample standard deviation of the return
// difference. Throws UndefinedStatistic with fewer than two periods or zero
// dispersion.
double sharpe_relative(std::span<const double> policy_returns,
                       std::span<const double> market_returns, double periods_per_year = 12.0);

// CSV: statistic row labels with one column per policy; the market column
// has no Sharpe entry.
std::string summary_table(const BacktestReport& report);

// Writes returns.csv, cumulative.csv, relative.csv, gamma_star.csv,
// carry.csv, summary.csv and summary.json into `dir`.
void write_report(const BacktestReport& report, const std::string& dir);

// Quotes a CSV field when it contains a comma or quote.
std::string csv_field(const std::string& s);
// %.12g
std::string format_number(double v);
std::string format_date(int date, DateFormat labels);

}  // namespace sptlab
