#include "sptlab/futures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "sptlab/error.hpp"
#include "sptlab/months.hpp"
#include "sptlab/panel_io.hpp"
#include "sptlab/rng.hpp"

namespace sptlab {

std::vector<FuturesQuote> read_quotes_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::DataValidation,
          "quotes: empty file");
  const auto header = split_csv_line(line);
  require(header == std::vector<std::string>{"commodity", "obs_month", "expiry_month", "price"},
          ErrorKind::DataValidation,
          "quotes: header must be commodity,obs_month,expiry_month,price");
  std::vector<FuturesQuote> out;
  std::set<std::tuple<std::string, int, int>> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string where = "quotes line " + std::to_string(lineno) + ": ";
    require(cells.size() == 4, ErrorKind::DataValidation, where + "expected 4 fields");
    FuturesQuote q;
    q.commodity = cells[0];
    require(!q.commodity.empty(), ErrorKind::DataValidation, where + "empty commodity");
    require(looks_like_month(cells[1]) && looks_like_month(cells[2]), ErrorKind::DataValidation,
            where + "months must be YYYY-MM");
    q.obs_month = parse_month(cells[1]);
    q.expiry_month = parse_month(cells[2]);
    char* end = nullptr;
    q.price = std::strtod(cells[3].c_str(), &end);
    require(!cells[3].empty() && *end == '\0', ErrorKind::DataValidation, where + "bad price");
    require(std::isfinite(q.price) && q.price > 0.0, ErrorKind::DataValidation,
            where + "price must be positive");
    require(q.expiry_month >= q.obs_month, ErrorKind::DataValidation,
            where + "expiry precedes observation");
    require(seen.emplace(q.commodity, q.obs_month, q.expiry_month).second,
            ErrorKind::DataValidation, where + "duplicate quote");
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<FuturesQuote> read_quotes_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open quotes file '" + path + "'");
  return read_quotes_csv(in);
}

void write_quotes_csv(std::ostream& out, const std::vector<FuturesQuote>& quotes) {
  out << "commodity,obs_month,expiry_month,price\n";
  char buf[64];
  for (const auto& q : quotes) {
    std::snprintf(buf, sizeof buf, "%.17g", q.price);
    out << q.commodity << ',' << format_month(q.obs_month) << ',' << format_month(q.expiry_month)
        << ',' << buf << '\n';
  }
}

QuoteBook::QuoteBook(const std::vector<FuturesQuote>& quotes) {
  for (const auto& q : quotes) {
    book_[q.commodity][q.obs_month][q.expiry_month - q.obs_month] = q.price;
  }
}

std::vector<std::string> QuoteBook::commodities() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : book_) out.push_back(name);
  return out;
}

const Curve* QuoteBook::curve(const std::string& commodity, int month) const {
  const auto c = book_.find(commodity);
  if (c == book_.end()) return nullptr;
  const auto m = c->second.find(month);
  return m == c->second.end() ? nullptr : &m->second;
}

std::optional<double> QuoteBook::price(const std::string& commodity, int obs_month,
                                       int expiry_month) const {
  const Curve* c = curve(commodity, obs_month);
  if (!c) return std::nullopt;
  const auto it = c->find(expiry_month - obs_month);
  if (it == c->end()) return std::nullopt;
  return it->second;
}

std::vector<int> QuoteBook::months(const std::string& commodity) const {
  std::vector<int> out;
  const auto c = book_.find(commodity);
  if (c == book_.end()) return out;
  for (const auto& [m, _] : c->second) out.push_back(m);
  return out;
}

namespace {

// Horizons ordered by distance from two months, shorter first on ties.
std::vector<int> by_closeness(const Curve& curve, bool include_two) {
  std::vector<int> nus;
  for (const auto& [nu, _] : curve) {
    if (include_two || nu != 2) nus.push_back(nu);
  }
  std::stable_sort(nus.begin(), nus.end(),
                   [](int a, int b) { return std::abs(a - 2) < std::abs(b - 2); });
  return nus;
}

}  // namespace

double carry_factor(const Curve& curve) {
  const auto nus = by_closeness(curve, false);
  require(nus.size() >= 2, ErrorKind::MissingCarry,
          "carry_factor: fewer than two contracts besides the two-month one");
  const int nu1 = std::min(nus[0], nus[1]);
  const int nu2 = std::max(nus[0], nus[1]);
  return (std::log(curve.at(nu2)) - std::log(curve.at(nu1))) / static_cast<double>(nu2 - nu1);
}

double implied_two_month_price(const Curve& curve, std::optional<double> delta) {
  require(!curve.empty(), ErrorKind::MissingCarry, "implied_two_month_price: no contracts");
  if (const auto it = curve.find(2); it != curve.end()) return it->second;
  require(delta.has_value(), ErrorKind::MissingCarry,
          "implied_two_month_price: carry factor needed to extrapolate");
  const int nu = by_closeness(curve, true).front();
  return std::exp(static_cast<double>(2 - nu) * *delta) * curve.at(nu);
}

ImpliedSeries build_implied_series(const QuoteBook& book, const std::string& commodity) {
  const auto months = book.months(commodity);
  ImpliedSeries s;
  s.commodity = commodity;
  bool started = false;
  for (int m = months.empty() ? 0 : months.front(); !months.empty() && m <= months.back(); ++m) {
    const Curve* c = book.curve(commodity, m);
    std::optional<double> delta;
    std::optional<double> implied;
    if (c) {
      try {
        delta = carry_factor(*c);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingCarry) throw;
      }
      try {
        implied = implied_two_month_price(*c, delta);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingCarry) throw;
      }
    }
    if (!implied) {
      require(!started, ErrorKind::DataValidation,
              commodity + ": no implied two-month price in " + format_month(m) +
                  " after the series started");
      continue;
    }
    if (!started) s.first_month = m;
    started = true;
    s.implied.push_back(*implied);
    s.carry_factor.push_back(delta);
  }
  require(started, ErrorKind::DataValidation, commodity + ": no implied two-month prices");
  return s;
}

PricePanel normalize_entries(const std::vector<ImpliedSeries>& series) {
  require(!series.empty(), ErrorKind::InvalidInput, "normalize_entries: no series");
  int first = series.front().first_month;
  const int last = series.front().last_month();
  for (const auto& s : series) {
    first = std::min(first, s.first_month);
    require(s.last_month() == last, ErrorKind::DataValidation,
            s.commodity + ": series ends in " + format_month(s.last_month()) +
                " but others end in " + format_month(last));
  }
  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.commodity);
  std::vector<int> dates;
  for (int m = first; m <= last; ++m) dates.push_back(m);
  PricePanel panel(names, dates, 1.0 / 12.0);

  std::vector<std::size_t> order(series.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series[a].first_month < series[b].first_month;
  });
  for (std::size_t k : order) {
    const auto& s = series[k];
    std::vector<double> logs(s.implied.size());
    for (std::size_t t = 0; t < logs.size(); ++t) logs[t] = std::log(s.implied[t]);
    const std::size_t start = static_cast<std::size_t>(s.first_month - first);
    panel.set_log_series(k, start, logs);
    double target = 0.0;
    if (s.first_month != first) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t j = 0; j < series.size(); ++j) {
        if (series[j].first_month < s.first_month) {
          sum += panel.log_price(j, start);
          ++count;
        }
      }
      target = sum / static_cast<double>(count);
    }
    panel.set_level(k, target - logs.front());
  }
  return panel;
}

HeldCarry held_contract_and_carry(const QuoteBook& book, const std::string& commodity, int t,
                                  double implied_change) {
  const Curve* now = book.curve(commodity, t);
  require(now != nullptr, ErrorKind::MissingCarry, commodity + ": no quotes in " + format_month(t));
  const auto it = now->lower_bound(2);
  require(it != now->end(), ErrorKind::MissingCarry,
          commodity + ": no contract of two months or longer in " + format_month(t));
  const int tau = t + it->first;
  const auto next = book.price(commodity, t + 1, tau);
  require(
      next.has_value(), ErrorKind::MissingCarry,
      commodity + ": held contract " + format_month(tau) + " not quoted in " + format_month(t + 1));
  const double futures_change = std::log(*next) - std::log(it->second);
  return {tau, futures_change - implied_change};
}

Matrix carry_matrix(const QuoteBook& book, const PricePanel& panel) {
  const std::size_t steps = panel.num_dates() > 0 ? panel.num_dates() - 1 : 0;
  Matrix out(steps, panel.num_assets(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < panel.num_assets(); ++a) {
    for (std::size_t t = panel.start(a); t < steps; ++t) {
      try {
        out(t, a) = held_contract_and_carry(book, panel.assets()[a], panel.dates()[t],
                                            panel.log_increment(a, t))
                        .carry;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingCarry) throw;
      }
    }
  }
  return out;
}

EligibilityCalendar eligibility(const std::vector<std::string>& commodities,
                                const std::vector<int>& data_start, int wait_months,
                                std::size_t min_count) {
  require(commodities.size() == data_start.size(), ErrorKind::InvalidInput,
          "eligibility: names and start months differ in length");
  require(min_count >= 1, ErrorKind::InvalidInput, "eligibility: min_count must be positive");
  EligibilityCalendar cal;
  cal.commodities = commodities;
  for (int s : data_start) cal.inclusion_month.push_back(s + wait_months);
  if (cal.inclusion_month.size() >= min_count) {
    auto sorted = cal.inclusion_month;
    std::sort(sorted.begin(), sorted.end());
    cal.portfolio_start = sorted[min_count - 1];
  }
  return cal;
}

std::vector<FuturesQuote> synthetic_fixture_quotes(std::uint64_t seed) {
  struct Spec {
    const char* name;
    int start;        // months after the first data month
    double contango;  // log price slope per month of horizon
    bool monthly;
    double price;
  };
  static constexpr Spec kSpecs[] = {
      {"soymeal", 0, 0.004, true, 100.0},        {"soyoil", 0, -0.006, false, 60.0},
      {"soybeans", 0, 0.012, true, 250.0},       {"wheat", 2, 0.03, true, 180.0},
      {"corn", 2, 0.008, false, 120.0},          {"hogs", 13, -0.015, true, 45.0},
      {"cotton", 47, 0.005, false, 35.0},        {"silver", 47, 0.002, true, 160.0},
      {"orange_juice", 48, -0.004, false, 50.0}, {"platinum", 48, 0.001, true, 130.0},
      {"sugar", 50, 0.009, false, 8.0},          {"lumber", 56, -0.01, true, 110.0},
  };
  const int first = parse_month("1968-11");
  const int months = 180;
  std::vector<FuturesQuote> out;
  for (std::size_t c = 0; c < std::size(kSpecs); ++c) {
    const Spec& sp = kSpecs[c];
    const NormalStream rng(seed, c);
    const double anchor = std::log(sp.price);
    double s = anchor;
    double z = 0.0;
    for (int k = sp.start; k <= months; ++k) {
      const int t = first + k;
      std::vector<int> horizons{0};
      for (int nu = 1; nu <= 12; ++nu) {
        if (sp.monthly ? nu <= 6 : (t + nu) % 3 == 2) horizons.push_back(nu);
      }
      for (int nu : horizons) {
        out.push_back({sp.name, t, t + nu, std::exp(s + sp.contango * nu)});
      }
      rng.fill(static_cast<std::uint64_t>(k), std::span<double>(&z, 1));
      s += -0.03 * (s - anchor) + 0.08 * z;
    }
  }
  return out;
}

}  // namespace sptlab
