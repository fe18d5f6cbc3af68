#pragma once
// Long-format panel CSV: header `date,asset,price`, one observation per row.
// Dates are `YYYY-MM` months or, for simulated panels on a finer grid,
// non-negative integer step indices.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sptlab/market.hpp"

namespace sptlab {

enum class DateFormat { Month, Index };

// Month dates imply dt = 1/12 unless `dt` is given; index dates require `dt`.
PricePanel read_panel_csv(std::istream& in, std::optional<double> dt = std::nullopt);
PricePanel read_panel_csv(const std::string& path, std::optional<double> dt = std::nullopt);

void write_panel_csv(std::ostream& out, const PricePanel& panel, DateFormat format);
void write_panel_csv(const std::string& path, const PricePanel& panel, DateFormat format);

// Splits one CSV line on commas, trimming surrounding blanks and CR.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace sptlab
