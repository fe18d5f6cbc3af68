#include <iostream>

#include "CLI11.hpp"
#include "sptlab/cli.hpp"

namespace {

void common_output(CLI::App* sub, sptlab::RunConfig& c) {
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
}

void window_options(CLI::App* sub, sptlab::RunConfig& c) {
  sub->add_option("--start", c.start, "first date (YYYY-MM or step index)");
  sub->add_option("--end", c.end, "last date (YYYY-MM or step index)");
}

void estimation_options(CLI::App* sub, sptlab::RunConfig& c) {
  sub->add_option("--bandwidth", c.bandwidth, "Gaussian filter std dev in ranks")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--mc-paths", c.mc_paths, "paths for the simulated rank-size curve")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void backtest_options(CLI::App* sub, sptlab::RunConfig& c) {
  sub->add_option("--policies", c.policies, "policy list, e.g. market,equal,reverse")
      ->capture_default_str();
  sub->add_option("--wait", c.wait_months, "months after data start before an asset is held")
      ->capture_default_str();
  sub->add_option("--min-assets", c.min_assets, "eligible assets needed to start")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  sptlab::RunConfig c;
  CLI::App app{"Rank-based market simulation, estimation and portfolio backtests"};
  app.set_config("--config", "", "INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "simulate a first-order market");
  sim->add_option("--g", c.g, "growth rates by rank")->delimiter(',')->required();
  sim->add_option("--sigma", c.sigma, "volatilities by rank")->delimiter(',')->required();
  sim->add_option("--initial", c.initial_log_prices, "initial log prices")->delimiter(',');
  sim->add_option("--steps", c.steps, "number of steps")->capture_default_str();
  sim->add_option("--dt", c.dt, "step in years (default 1/252)")->check(CLI::PositiveNumber);
  sim->add_option("--substeps", c.substeps, "normal draws per step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", c.seed, "random seed")->capture_default_str();
  common_output(sim, c);

  auto* est = app.add_subcommand("estimate", "fit a first-order approximation to a panel");
  est->add_option("--panel", c.panel, "panel CSV (date,asset,price)")->required();
  est->add_option("--dt", c.dt, "step in years for index-dated panels")->check(CLI::PositiveNumber);
  window_options(est, c);
  estimation_options(est, c);
  common_output(est, c);

  auto* ing = app.add_subcommand("ingest", "build normalized implied prices and carry");
  ing->add_option("--quotes", c.quotes, "quotes CSV")->required();
  ing->add_option("--wait", c.wait_months, "months after data start before inclusion")
      ->capture_default_str();
  ing->add_option("--min-assets", c.min_assets, "eligible assets needed to start")
      ->capture_default_str();
  common_output(ing, c);

  auto* bt = app.add_subcommand("backtest", "backtest weight policies");
  bt->add_option("--panel", c.panel, "panel CSV")->required();
  bt->add_option("--quotes", c.quotes, "quotes CSV for carry (zero carry if omitted)");
  bt->add_option("--dt", c.dt, "step in years for index-dated panels")->check(CLI::PositiveNumber);
  window_options(bt, c);
  backtest_options(bt, c);
  common_output(bt, c);

  auto* rep = app.add_subcommand("reproduce", "write the figure and table data for a quote set");
  rep->add_option("--quotes", c.quotes, "quotes CSV")->required();
  backtest_options(rep, c);
  estimation_options(rep, c);
  common_output(rep, c);

  auto* fix = app.add_subcommand("fixture", "write the synthetic futures quote set");
  fix->add_option("--seed", c.seed, "random seed")->capture_default_str();
  common_output(fix, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) sptlab::cmd_simulate(c);
    if (*est) sptlab::cmd_estimate(c);
    if (*ing) sptlab::cmd_ingest(c);
    if (*bt) sptlab::cmd_backtest(c);
    if (*rep) sptlab::cmd_reproduce(c);
    if (*fix) sptlab::cmd_fixture(c);
  } catch (const sptlab::Error& e) {
    std::cerr << "error (" << sptlab::to_string(e.kind()) << "): " << e.what() << '\n';
    return sptlab::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
