#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "sptlab/backtest.hpp"
#include "sptlab/cli.hpp"
#include "sptlab/estimation.hpp"
#include "sptlab/first_order.hpp"
#include "sptlab/futures.hpp"
#include "sptlab/months.hpp"
#include "sptlab/panel_io.hpp"
#include "sptlab/policies.hpp"

namespace fs = std::filesystem;

namespace sptlab {
namespace {

using Json = nlohmann::ordered_json;

std::string out_file(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

void write_json(const std::string& path, const Json& j) { open_out(path) << j.dump(2) << '\n'; }

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

void require_file(const std::string& path, const char* what) {
  require(!path.empty(), ErrorKind::Usage, std::string("missing --") + what);
  require(fs::is_regular_file(path), ErrorKind::Io,
          std::string(what) + " file '" + path + "' does not exist");
}

DateFormat detect_format(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const auto f = split_csv_line(line);
  return !f.empty() && looks_like_month(f[0]) ? DateFormat::Month : DateFormat::Index;
}

struct LoadedPanel {
  PricePanel panel;
  DateFormat format;
};

LoadedPanel load_panel(const RunConfig& c) {
  require_file(c.panel, "panel");
  std::optional<double> dt;
  if (c.dt > 0.0) {
    dt = c.dt;
  } else {
    const fs::path sidecar = fs::path(c.panel).replace_extension(".json");
    if (fs::is_regular_file(sidecar)) {
      std::ifstream in(sidecar);
      const Json j = Json::parse(in, nullptr, false);
      if (j.is_object() && j.contains("dt") && j["dt"].is_number()) dt = j["dt"].get<double>();
    }
  }
  return {read_panel_csv(c.panel, dt), detect_format(c.panel)};
}

std::size_t resolve_date(const PricePanel& panel, const std::string& text, DateFormat fmt) {
  int date = 0;
  if (fmt == DateFormat::Month) {
    require(looks_like_month(text), ErrorKind::Usage, "date '" + text + "' must be YYYY-MM");
    date = parse_month(text);
  } else {
    char* end = nullptr;
    date = static_cast<int>(std::strtol(text.c_str(), &end, 10));
    require(!text.empty() && *end == '\0', ErrorKind::Usage,
            "date '" + text + "' must be an integer step index");
  }
  const auto t = panel.find_date(date);
  require(t.has_value(), ErrorKind::DataValidation, "date '" + text + "' is not in the panel");
  return *t;
}

PricePanel restrict(const LoadedPanel& lp, const RunConfig& c) {
  const std::size_t t0 = c.start.empty() ? 0 : resolve_date(lp.panel, c.start, lp.format);
  const std::size_t t1 =
      c.end.empty() ? lp.panel.num_dates() - 1 : resolve_date(lp.panel, c.end, lp.format);
  require(t0 < t1, ErrorKind::Usage, "--start must precede --end");
  return lp.panel.window(t0, t1);
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

struct EstimateOutputs {
  FirstOrderEstimate est;
  std::vector<double> g_smoothed;
  std::vector<double> sigma_smoothed;
  std::vector<double> observed_curve;
  std::vector<double> simulated_curve;  // empty when the estimate is not a valid model
};

EstimateOutputs run_estimate(const PricePanel& panel, const RunConfig& c) {
  EstimateOutputs o;
  o.est = estimate_first_order(panel);
  for (const auto& w : o.est.warnings) warn(w);
  o.g_smoothed = reflected_gaussian_filter(o.est.g, c.bandwidth);
  o.sigma_smoothed = reflected_gaussian_filter(o.est.sigma, c.bandwidth);
  o.observed_curve = rank_size_curve(panel);
  const auto params = o.est.params();
  if (!validate_params(params).empty()) {
    warn("estimated parameters do not define a stable model; skipping the simulated curve");
    return o;
  }
  SimConfig sim;
  sim.steps = panel.num_dates() - 1;
  sim.dt = panel.dt();
  sim.seed = c.seed;
  sim.paths = c.mc_paths;
  sim.initial_log_prices = panel.log_prices_at(0);
  o.simulated_curve = simulated_rank_size_curve(params, sim);
  return o;
}

void write_rank_size(const std::string& path, const EstimateOutputs& o) {
  auto out = open_out(path);
  out << "rank,observed,simulated\n";
  for (std::size_t k = 0; k < o.observed_curve.size(); ++k) {
    out << k + 1 << ',' << format_number(o.observed_curve[k]) << ','
        << (o.simulated_curve.empty() ? "" : format_number(o.simulated_curve[k])) << '\n';
  }
}

struct Pipeline {
  QuoteBook book;
  PricePanel panel;
  Matrix carry;
  EligibilityCalendar calendar;
};

Pipeline ingest(const RunConfig& c) {
  require_file(c.quotes, "quotes");
  Pipeline p;
  p.book = QuoteBook(read_quotes_csv(c.quotes));
  std::vector<ImpliedSeries> series;
  for (const auto& name : p.book.commodities())
    series.push_back(build_implied_series(p.book, name));
  p.panel = normalize_entries(series);
  p.carry = carry_matrix(p.book, p.panel);
  std::vector<int> starts;
  for (const auto& s : series) starts.push_back(s.first_month);
  p.calendar = eligibility(p.panel.assets(), starts, c.wait_months, c.min_assets);
  return p;
}

EligibilityCalendar panel_calendar(const PricePanel& panel, const RunConfig& c) {
  std::vector<int> starts;
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    starts.push_back(panel.dates()[panel.start(a)]);
  }
  return eligibility(panel.assets(), starts, c.wait_months, c.min_assets);
}

BacktestReport backtest(const PricePanel& panel, const Matrix* carry,
                        const EligibilityCalendar& cal, DateFormat fmt, const RunConfig& c) {
  const auto policies = parse_policy_list(c.policies, panel.assets());
  require(cal.portfolio_start.has_value(), ErrorKind::DataValidation,
          "fewer than " + std::to_string(c.min_assets) + " assets ever become eligible");
  const auto first = panel.find_date(*cal.portfolio_start);
  require(first.has_value() && *first + 1 < panel.num_dates(), ErrorKind::DataValidation,
          "portfolio start " + format_date(*cal.portfolio_start, fmt) +
              " leaves no periods in the panel");
  BacktestOptions opt;
  opt.start = *first;
  if (!c.start.empty()) {
    const std::size_t requested = resolve_date(panel, c.start, fmt);
    if (requested < *first) {
      warn("--start " + c.start + " precedes eligibility; starting at " +
           format_date(*cal.portfolio_start, fmt));
    } else {
      opt.start = requested;
    }
  }
  if (!c.end.empty()) opt.end = resolve_date(panel, c.end, fmt);
  opt.inclusion_month = cal.inclusion_month;
  opt.carry = carry;
  opt.labels = fmt;
  return run_backtest(panel, policies, opt);
}

void write_long_matrix(const std::string& path, const PricePanel& panel, const Matrix& m,
                       const char* column, DateFormat fmt) {
  auto out = open_out(path);
  out << "date,asset," << column << '\n';
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t a = 0; a < m.cols(); ++a) {
      if (std::isnan(m(t, a))) continue;
      out << format_date(panel.dates()[t], fmt) << ',' << csv_field(panel.assets()[a]) << ','
          << format_number(m(t, a)) << '\n';
    }
  }
}

void write_wide_series(const std::string& path, const BacktestReport& r,
                       std::vector<double> PolicySeries::* field) {
  auto out = open_out(path);
  out << "date";
  for (const auto& p : r.policies) out << ',' << csv_field(p.name);
  out << '\n';
  for (std::size_t t = 0; t < r.dates.size(); ++t) {
    out << format_date(r.dates[t], r.labels);
    for (const auto& p : r.policies) out << ',' << format_number((p.*field)[t]);
    out << '\n';
  }
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return 2;
    case ErrorKind::DataValidation:
    case ErrorKind::InsufficientData:
    case ErrorKind::MissingCarry:
    case ErrorKind::Io:
      return 3;
    default:
      return 4;
  }
}

void cmd_simulate(const RunConfig& c) {
  const FirstOrderParams params{c.g, c.sigma};
  require_valid(params);
  SimConfig sim;
  sim.steps = c.steps;
  sim.dt = c.dt > 0.0 ? c.dt : 1.0 / 252.0;
  sim.seed = c.seed;
  sim.initial_log_prices = c.initial_log_prices;
  sim.brownian_substeps = c.substeps;
  const PricePanel panel = simulate(params, sim);
  write_panel_csv(out_file(c, "panel.csv"), panel, DateFormat::Index);
  Json j;
  j["dt"] = sim.dt;
  j["steps"] = sim.steps;
  j["seed"] = sim.seed;
  j["brownian_substeps"] = sim.brownian_substeps;
  j["g"] = to_json(params.g);
  j["sigma"] = to_json(params.sigma);
  j["initial_log_prices"] =
      to_json(sim.initial_log_prices.empty() ? std::vector<double>(params.n(), 0.0)
                                             : sim.initial_log_prices);
  j["date_format"] = "index";
  write_json(out_file(c, "panel.json"), j);
}

void cmd_estimate(const RunConfig& c) {
  const LoadedPanel lp = load_panel(c);
  const PricePanel panel = restrict(lp, c);
  const EstimateOutputs o = run_estimate(panel, c);

  Json j;
  j["n"] = o.est.n;
  j["sample_span"] = o.est.sample_span;
  j["bandwidth"] = c.bandwidth;
  j["lambda"] = to_json(o.est.lambda);
  j["gap_var"] = to_json(o.est.gap_var);
  j["g"] = to_json(o.est.g);
  j["sigma"] = to_json(o.est.sigma);
  j["g_smoothed"] = to_json(o.g_smoothed);
  j["sigma_smoothed"] = to_json(o.sigma_smoothed);
  j["warnings"] = o.est.warnings;
  write_json(out_file(c, "estimate.json"), j);

  auto out = open_out(out_file(c, "estimate.csv"));
  out << "rank,g,sigma,g_smoothed,sigma_smoothed,lambda,gap_var\n";
  for (std::size_t k = 0; k < o.est.n; ++k) {
    out << k + 1 << ',' << format_number(o.est.g[k]) << ',' << format_number(o.est.sigma[k]) << ','
        << format_number(o.g_smoothed[k]) << ',' << format_number(o.sigma_smoothed[k]) << ',';
    if (k + 1 < o.est.n) {
      out << format_number(o.est.lambda[k]) << ',' << format_number(o.est.gap_var[k]);
    } else {
      out << ',';
    }
    out << '\n';
  }
  write_rank_size(out_file(c, "rank_size.csv"), o);
}

void cmd_ingest(const RunConfig& c) {
  const Pipeline p = ingest(c);
  write_panel_csv(out_file(c, "implied_panel.csv"), p.panel, DateFormat::Month);
  write_long_matrix(out_file(c, "carry.csv"), p.panel, p.carry, "carry", DateFormat::Month);
  auto out = open_out(out_file(c, "eligibility.csv"));
  out << "commodity,data_start,inclusion_month\n";
  for (std::size_t a = 0; a < p.panel.num_assets(); ++a) {
    out << csv_field(p.panel.assets()[a]) << ',' << format_month(p.panel.dates()[p.panel.start(a)])
        << ',' << format_month(p.calendar.inclusion_month[a]) << '\n';
  }
  out << "portfolio_start,,"
      << (p.calendar.portfolio_start ? format_month(*p.calendar.portfolio_start) : "") << "\n";
}

void cmd_backtest(const RunConfig& c) {
  const LoadedPanel lp = load_panel(c);
  std::optional<Matrix> carry;
  if (!c.quotes.empty()) {
    require_file(c.quotes, "quotes");
    carry = carry_matrix(QuoteBook(read_quotes_csv(c.quotes)), lp.panel);
  }
  const auto cal = panel_calendar(lp.panel, c);
  const auto report = backtest(lp.panel, carry ? &*carry : nullptr, cal, lp.format, c);
  write_report(report, c.out);
}

void cmd_reproduce(const RunConfig& c) {
  const Pipeline p = ingest(c);
  const auto report = backtest(p.panel, &p.carry, p.calendar, DateFormat::Month, c);

  {
    auto out = open_out(out_file(c, "relative_prices.csv"));
    out << "date";
    for (const auto& a : p.panel.assets()) out << ',' << csv_field(a);
    out << '\n';
    for (std::size_t t = 0; t < p.panel.num_dates(); ++t) {
      const auto active = p.panel.active(t);
      double mean = 0.0;
      for (std::size_t a : active) mean += p.panel.log_price(a, t);
      mean /= static_cast<double>(active.size());
      out << format_month(p.panel.dates()[t]);
      for (std::size_t a = 0; a < p.panel.num_assets(); ++a) {
        out << ',';
        if (p.panel.available(a, t)) out << format_number(p.panel.log_price(a, t) - mean);
      }
      out << '\n';
    }
  }
  write_wide_series(out_file(c, "cumulative_returns.csv"), report, &PolicySeries::cumulative);
  write_wide_series(out_file(c, "relative_returns.csv"), report,
                    &PolicySeries::relative_cumulative);
  write_wide_series(out_file(c, "cumulative_gamma_star.csv"), report,
                    &PolicySeries::gamma_star_cum);
  write_wide_series(out_file(c, "cumulative_carry.csv"), report, &PolicySeries::carry_cum);

  // First-order fit on the window where every asset is present and eligible.
  int last_inclusion = p.calendar.inclusion_month.front();
  for (int m : p.calendar.inclusion_month) last_inclusion = std::max(last_inclusion, m);
  const auto t0 = p.panel.find_date(last_inclusion);
  require(t0.has_value() && *t0 + 1 < p.panel.num_dates(), ErrorKind::InsufficientData,
          "no fixed-membership window after the last inclusion month");
  const PricePanel window = p.panel.window(*t0, p.panel.num_dates() - 1);
  const EstimateOutputs o = run_estimate(window, c);
  {
    auto out = open_out(out_file(c, "growth_rates.csv"));
    out << "rank,g,g_smoothed\n";
    for (std::size_t k = 0; k < o.est.n; ++k) {
      out << k + 1 << ',' << format_number(o.est.g[k]) << ',' << format_number(o.g_smoothed[k])
          << '\n';
    }
  }
  {
    auto out = open_out(out_file(c, "volatilities.csv"));
    out << "rank,sigma,sigma_smoothed\n";
    for (std::size_t k = 0; k < o.est.n; ++k) {
      out << k + 1 << ',' << format_number(o.est.sigma[k]) << ','
          << format_number(o.sigma_smoothed[k]) << '\n';
    }
  }
  write_rank_size(out_file(c, "rank_size.csv"), o);
}

void cmd_fixture(const RunConfig& c) {
  auto out = open_out(out_file(c, "fixture_quotes.csv"));
  write_quotes_csv(out, synthetic_fixture_quotes(c.seed));
}

}  // namespace sptlab
