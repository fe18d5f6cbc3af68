#include "sptlab/panel_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "sptlab/error.hpp"
#include "sptlab/months.hpp"

namespace sptlab {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  require(end != text.c_str() && *end == '\0', ErrorKind::DataValidation,
          "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  return v;
}

int parse_date(const std::string& text, bool& is_month, std::size_t line_no) {
  if (looks_like_month(text)) {
    is_month = true;
    return parse_month(text);
  }
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  require(ec == std::errc() && ptr == text.data() + text.size() && v >= 0,
          ErrorKind::DataValidation,
          "line " + std::to_string(line_no) + ": bad date '" + text + "'");
  is_month = false;
  return v;
}

std::string format_price(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(
        trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

PricePanel read_panel_csv(std::istream& in, std::optional<double> dt) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::DataValidation,
          "panel csv: empty input");
  const auto header = split_csv_line(line);
  require(header == std::vector<std::string>{"date", "asset", "price"}, ErrorKind::DataValidation,
          "panel csv: header must be 'date,asset,price'");

  std::vector<std::string> assets;
  std::map<std::string, std::size_t> index;
  std::vector<std::map<int, double>> series;
  std::set<int> all_dates;
  std::optional<bool> month_dates;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == 3, ErrorKind::DataValidation,
            "panel csv line " + std::to_string(line_no) + ": expected 3 fields");
    bool is_month = false;
    const int date = parse_date(f[0], is_month, line_no);
    require(!month_dates || *month_dates == is_month, ErrorKind::DataValidation,
            "panel csv: mixed month and index dates");
    month_dates = is_month;
    const double price = parse_double(f[2], line_no);
    require(std::isfinite(price) && price > 0.0, ErrorKind::DataValidation,
            "panel csv line " + std::to_string(line_no) + ": price must be strictly positive");
    auto [it, inserted] = index.try_emplace(f[1], assets.size());
    if (inserted) {
      assets.push_back(f[1]);
      series.emplace_back();
    }
    require(series[it->second].emplace(date, price).second, ErrorKind::DataValidation,
            "panel csv line " + std::to_string(line_no) + ": duplicate observation");
    all_dates.insert(date);
  }
  require(!assets.empty(), ErrorKind::DataValidation, "panel csv: no observations");

  double step = 0.0;
  if (dt) {
    step = *dt;
  } else {
    require(*month_dates, ErrorKind::Usage,
            "panel csv: integer dates need an explicit dt (e.g. --dt 0.003968)");
    step = 1.0 / 12.0;
  }

  std::vector<int> dates(all_dates.begin(), all_dates.end());
  auto label = [&](int d) { return *month_dates ? format_month(d) : std::to_string(d); };
  for (std::size_t t = 1; t < dates.size(); ++t) {
    require(dates[t] == dates[t - 1] + 1, ErrorKind::DataValidation,
            "panel csv: calendar skips from " + label(dates[t - 1]) + " to " + label(dates[t]));
  }
  PricePanel panel(assets, dates, step);
  for (std::size_t a = 0; a < assets.size(); ++a) {
    const auto& s = series[a];
    const std::size_t start = static_cast<std::size_t>(
        std::lower_bound(dates.begin(), dates.end(), s.begin()->first) - dates.begin());
    std::vector<double> logs;
    for (std::size_t t = start; t < dates.size(); ++t) {
      auto it = s.find(dates[t]);
      require(it != s.end(), ErrorKind::DataValidation,
              "panel csv: asset '" + assets[a] + "' has a gap at date " +
                  (*month_dates ? format_month(dates[t]) : std::to_string(dates[t])));
      logs.push_back(std::log(it->second));
    }
    panel.set_log_series(a, start, logs);
  }
  return panel;
}

PricePanel read_panel_csv(const std::string& path, std::optional<double> dt) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open panel file: " + path);
  return read_panel_csv(in, dt);
}

void write_panel_csv(std::ostream& out, const PricePanel& panel, DateFormat format) {
  out << "date,asset,price\n";
  for (std::size_t t = 0; t < panel.num_dates(); ++t) {
    const int d = panel.dates()[t];
    const std::string date = format == DateFormat::Month ? format_month(d) : std::to_string(d);
    for (std::size_t i = 0; i < panel.num_assets(); ++i) {
      if (!panel.available(i, t)) continue;
      out << date << ',' << panel.assets()[i] << ',' << format_price(panel.price(i, t)) << '\n';
    }
  }
}

void write_panel_csv(const std::string& path, const PricePanel& panel, DateFormat format) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write panel file: " + path);
  write_panel_csv(out, panel, format);
}

}  // namespace sptlab
