#pragma once
// Subcommands behind the `sptlab` executable. Each writes its outputs into
// config.out and throws sptlab::Error on failure.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sptlab/error.hpp"

namespace sptlab {

struct RunConfig {
  std::string subcommand;
  std::string panel;
  std::string quotes;
  std::string out = ".";
  std::uint64_t seed = 1;
  double dt = 0.0;  // 0: take from the sidecar or the date format
  std::size_t steps = 2520;
  std::size_t substeps = 1;
  std::vector<double> g;
  std::vector<double> sigma;
  std::vector<double> initial_log_prices;
  std::string policies = "market,equal,diversity:-0.5,reverse";
  std::string start;
  std::string end;
  double bandwidth = 6.0;
  std::size_t mc_paths = 1000;
  int wait_months = 60;
  std::size_t min_assets = 10;
};

// Writes panel.csv and panel.json.
void cmd_simulate(const RunConfig& config);
// Writes estimate.json, estimate.csv and rank_size.csv.
void cmd_estimate(const RunConfig& config);
// Writes implied_panel.csv, carry.csv and eligibility.csv.
void cmd_ingest(const RunConfig& config);
// Writes the backtest report files.
void cmd_backtest(const RunConfig& config);
// Writes eight plot-ready CSV files.
void cmd_reproduce(const RunConfig& config);
// Writes fixture_quotes.csv.
void cmd_fixture(const RunConfig& config);

// 0 ok, 2 usage, 3 data, 4 numeric or constraint.
int exit_code(ErrorKind kind);

}  // namespace sptlab
