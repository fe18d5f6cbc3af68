#include "sptlab/backtest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"
#include "sptlab/months.hpp"

namespace sptlab {
namespace {

struct PeriodSet {
  std::vector<std::size_t> assets;
  std::vector<double> log_prices;
  std::vector<double> moves;  // dlog X
  std::vector<double> carry;
};

PeriodSet holdable(const PricePanel& panel, const BacktestOptions& opt, std::size_t t) {
  PeriodSet s;
  for (std::size_t a : panel.active(t)) {
    if (!opt.inclusion_month.empty() && panel.dates()[t] < opt.inclusion_month[a]) continue;
    const double c = opt.carry ? (*opt.carry)(t, a) : 0.0;
    if (std::isnan(c)) continue;
    s.assets.push_back(a);
    s.log_prices.push_back(panel.log_price(a, t));
    s.moves.push_back(panel.log_increment(a, t));
    s.carry.push_back(c);
  }
  return s;
}

struct PeriodResult {
  double log_return;
  double price_return;
  double carry;
};

PeriodResult period(const WeightPolicy& policy, const PeriodSet& s) {
  const WeightVector pi = apply_policy(policy, s.log_prices, s.assets);
  double growth = 0.0;
  for (std::size_t k = 0; k < s.assets.size(); ++k) {
    growth += pi[k] * std::exp(s.moves[k] + s.carry[k]);
  }
  return {std::log(growth), kernels::dot(pi.values(), s.moves), kernels::dot(pi.values(), s.carry)};
}

std::vector<double> running(std::span<const double> x) {
  std::vector<double> out(x.size() + 1, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) out[t + 1] = out[t] + x[t];
  return out;
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

}  // namespace

BacktestReport run_backtest(const PricePanel& panel, const std::vector<WeightPolicy>& policies,
                            const BacktestOptions& opt) {
  require(panel.num_dates() >= 2, ErrorKind::InsufficientData, "backtest: need two dates");
  const std::size_t end = opt.end.value_or(panel.num_dates() - 1);
  require(end < panel.num_dates() && opt.start < end, ErrorKind::InvalidInput,
          "backtest: empty or out-of-range date window");
  require(opt.inclusion_month.empty() || opt.inclusion_month.size() == panel.num_assets(),
          ErrorKind::InvalidInput, "backtest: inclusion months must cover every asset");
  require(!opt.carry || (opt.carry->rows() + 1 == panel.num_dates() &&
                         opt.carry->cols() == panel.num_assets()),
          ErrorKind::InvalidInput, "backtest: carry matrix does not match the panel");

  BacktestReport r;
  r.periods_per_year = 1.0 / panel.dt();
  r.labels = opt.labels;
  r.dates.assign(panel.dates().begin() + static_cast<std::ptrdiff_t>(opt.start),
                 panel.dates().begin() + static_cast<std::ptrdiff_t>(end) + 1);
  const std::size_t periods = end - opt.start;

  std::vector<PeriodSet> sets;
  sets.reserve(periods);
  for (std::size_t t = opt.start; t < end; ++t) {
    sets.push_back(holdable(panel, opt, t));
    require(!sets.back().assets.empty(), ErrorKind::InvalidInput,
            "backtest: no holdable assets at " + format_date(panel.dates()[t], opt.labels));
  }

  r.market_log_returns.resize(periods);
  for (std::size_t t = 0; t < periods; ++t) {
    r.market_log_returns[t] = period(policy::Market{}, sets[t]).log_return;
  }

  for (const auto& policy : policies) {
    PolicySeries s;
    s.name = policy_name(policy, panel.assets());
    s.log_returns.resize(periods);
    s.price_return.resize(periods);
    s.carry.resize(periods);
    s.gamma_star_dt.resize(periods);
    std::vector<double> rel(periods);
    for (std::size_t t = 0; t < periods; ++t) {
      const PeriodResult p = period(policy, sets[t]);
      s.log_returns[t] = p.log_return;
      s.price_return[t] = p.price_return;
      s.carry[t] = p.carry;
      s.gamma_star_dt[t] = p.log_return - (p.price_return + p.carry);
      rel[t] = p.log_return - r.market_log_returns[t];
    }
    s.cumulative = running(s.log_returns);
    s.relative_cumulative = running(rel);
    s.gamma_star_cum = running(s.gamma_star_dt);
    s.carry_cum = running(s.carry);
    if (periods >= 2) {
      s.annual_mean = mean_of(s.log_returns) * r.periods_per_year;
      s.annual_std = sample_std(s.log_returns) * std::sqrt(r.periods_per_year);
      if (!is_market(policy)) {
        try {
          s.sharpe = sharpe_relative(s.log_returns, r.market_log_returns, r.periods_per_year);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::UndefinedStatistic) throw;
        }
      }
    }
    r.policies.push_back(std::move(s));
  }
  return r;
}

double sharpe_relative(std::span<const double> policy_returns,
                       std::span<const double> market_returns, double periods_per_year) {
  require(policy_returns.size() == market_returns.size(), ErrorKind::InvalidInput,
          "sharpe_relative: series lengths differ");
  require(policy_returns.size() >= 2, ErrorKind::UndefinedStatistic,
          "sharpe_relative: need at least two periods");
  std::vector<double> d(policy_returns.size());
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = policy_returns[t] - market_returns[t];
  const double m = mean_of(d);
  const double sd = sample_std(d);
  require(sd > 0.0 && sd > 1e-12 * std::fabs(m), ErrorKind::UndefinedStatistic,
          "sharpe_relative: relative returns have zero dispersion");
  return (m * periods_per_year) / (sd * std::sqrt(periods_per_year));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_date(int date, DateFormat labels) {
  return labels == DateFormat::Month ? format_month(date) : std::to_string(date);
}

std::string summary_table(const BacktestReport& r) {
  std::ostringstream out;
  out << "statistic";
  for (const auto& p : r.policies) out << ',' << csv_field(p.name);
  out << '\n';
  if (r.policies.empty()) return out.str();
  out << "average";
  for (const auto& p : r.policies) out << ',' << format_number(p.annual_mean);
  out << "\nstd_dev";
  for (const auto& p : r.policies) out << ',' << format_number(p.annual_std);
  out << "\nsharpe";
  for (const auto& p : r.policies) out << ',' << (p.sharpe ? format_number(*p.sharpe) : "");
  out << '\n';
  return out.str();
}

namespace {

void write_wide(const BacktestReport& r, const std::string& path,
                std::vector<double> PolicySeries::* field, bool per_period) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write '" + path + "'");
  out << "date";
  for (const auto& p : r.policies) out << ',' << csv_field(p.name);
  out << '\n';
  const std::size_t offset = per_period ? 1 : 0;
  for (std::size_t t = offset; t < r.dates.size(); ++t) {
    out << format_date(r.dates[t], r.labels);
    for (const auto& p : r.policies) out << ',' << format_number((p.*field)[t - offset]);
    out << '\n';
  }
}

}  // namespace

void write_report(const BacktestReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_wide(r, (base / "returns.csv").string(), &PolicySeries::log_returns, true);
  write_wide(r, (base / "cumulative.csv").string(), &PolicySeries::cumulative, false);
  write_wide(r, (base / "relative.csv").string(), &PolicySeries::relative_cumulative, false);
  write_wide(r, (base / "gamma_star.csv").string(), &PolicySeries::gamma_star_cum, false);
  write_wide(r, (base / "carry.csv").string(), &PolicySeries::carry_cum, false);
  {
    std::ofstream out(base / "summary.csv");
    require(out.good(), ErrorKind::Io, "cannot write summary.csv in '" + dir + "'");
    out << summary_table(r);
  }
  nlohmann::ordered_json j;
  j["start"] = format_date(r.dates.front(), r.labels);
  j["end"] = format_date(r.dates.back(), r.labels);
  j["periods"] = r.dates.size() - 1;
  j["periods_per_year"] = r.periods_per_year;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& p : r.policies) {
    nlohmann::ordered_json row;
    row["policy"] = p.name;
    row["annual_mean"] = p.annual_mean;
    row["annual_std"] = p.annual_std;
    row["sharpe"] = p.sharpe ? nlohmann::ordered_json(*p.sharpe) : nlohmann::ordered_json();
    row["cumulative_log_return"] = p.cumulative.back();
    row["relative_log_return"] = p.relative_cumulative.back();
    row["cumulative_gamma_star"] = p.gamma_star_cum.back();
    row["cumulative_carry"] = p.carry_cum.back();
    rows.push_back(std::move(row));
  }
  j["policies"] = std::move(rows);
  std::ofstream out(base / "summary.json");
  require(out.good(), ErrorKind::Io, "cannot write summary.json in '" + dir + "'");
  out << j.dump(2) << '\n';
}

}  // namespace sptlab
