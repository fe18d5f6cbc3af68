#pragma once
// Commodity futures: quote ingestion, carry factors, implied two-month
// prices, entry normalization, eligibility and per-month carry.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sptlab/market.hpp"

namespace sptlab {

struct FuturesQuote {
  std::string commodity;
  int obs_month = 0;
  int expiry_month = 0;
  double price = 0.0;
};

// Quotes CSV: `commodity,obs_month,expiry_month,price`, months as YYYY-MM.
std::vector<FuturesQuote> read_quotes_csv(std::istream& in);
std::vector<FuturesQuote> read_quotes_csv(const std::string& path);
void write_quotes_csv(std::ostream& out, const std::vector<FuturesQuote>& quotes);

// Term structure on one date: months to expiry -> price.
using Curve = std::map<int, double>;

class QuoteBook {
 public:
  QuoteBook() = default;
  explicit QuoteBook(const std::vector<FuturesQuote>& quotes);

  // Sorted by name.
  std::vector<std::string> commodities() const;
  // nullptr when the commodity has no quotes that month.
  const Curve* curve(const std::string& commodity, int month) const;
  std::optional<double> price(const std::string& commodity, int obs_month, int expiry_month) const;
  // Observation months with at least one quote, ascending.
  std::vector<int> months(const std::string& commodity) const;

 private:
  std::map<std::string, std::map<int, Curve>> book_;
};

// Slope of log price per month between the two quoted horizons closest to
// two months, excluding two itself; ties go to the shorter horizon. Throws
// MissingCarry with fewer than two such horizons.
double carry_factor(const Curve& curve);
// The two-month price when quoted; otherwise the closest horizon (shorter on
// ties) carried to two months at slope `delta`.
double implied_two_month_price(const Curve& curve, std::optional<double> delta);

struct ImpliedSeries {
  std::string commodity;
  int first_month = 0;
  std::vector<double> implied;                      // consecutive months
  std::vector<std::optional<double>> carry_factor;  // when computable

  int last_month() const { return first_month + static_cast<int>(implied.size()) - 1; }
};

// From the first month with an implied price to the last quoted month.
// Throws DataValidation on an interior gap.
ImpliedSeries build_implied_series(const QuoteBook& book, const std::string& commodity);

// Monthly panel (dt = 1/12) of normalized log implied prices. Series starting
// in the earliest month are set to log price 0; each later entrant starts at
// the mean log price of the series already present that month. Every series
// must run to the common last month.
PricePanel normalize_entries(const std::vector<ImpliedSeries>& series);

struct HeldCarry {
  int expiry_month = 0;
  double carry = 0.0;  // C dt for the month
};

// Holds the two-month contract when quoted, else the nearest longer one, from
// month t to t + 1. `implied_change` is log X(t+1) - log X(t).
HeldCarry held_contract_and_carry(const QuoteBook& book, const std::string& commodity, int t,
                                  double implied_change);

// (dates - 1) x assets matrix of monthly carry; NaN where undefined or the
// asset is not yet present.
Matrix carry_matrix(const QuoteBook& book, const PricePanel& panel);

struct EligibilityCalendar {
  std::vector<std::string> commodities;
  std::vector<int> inclusion_month;
  std::optional<int> portfolio_start;

  bool included(std::size_t k, int month) const { return month >= inclusion_month[k]; }
};

EligibilityCalendar eligibility(const std::vector<std::string>& commodities,
                                const std::vector<int>& data_start, int wait_months = 60,
                                std::size_t min_count = 10);

// Deterministic synthetic quote set: twelve commodities with staggered starts,
// constant per-commodity contango, a mix of monthly and quarterly expiries.
std::vector<FuturesQuote> synthetic_fixture_quotes(std::uint64_t seed = 1);

}  // namespace sptlab
