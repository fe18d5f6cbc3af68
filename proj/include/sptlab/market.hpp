#pragma once
// Foundational market types: price panels, ranks, weights, and realized
// (quadratic-variation) covariance estimators.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sptlab {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Portfolio weights at one date. Always finite and summing to one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  WeightVector() = default;
  // Throws InvalidInput unless the entries are finite and sum to 1.
  explicit WeightVector(std::vector<double> weights);
  // Divides by the sum; the sum must be finite and positive.
  static WeightVector normalize(std::vector<double> raw);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }
  auto begin() const { return w_.begin(); }
  auto end() const { return w_.end(); }

 private:
  std::vector<double> w_;
};

// rank_of[i] is the 0-based rank of name i (0 = largest); name_at inverts it.
struct RankState {
  std::vector<std::size_t> rank_of;
  std::vector<std::size_t> name_at;

  std::size_t size() const { return rank_of.size(); }
};

// Annualized realized covariance: sigma(i,j) * dt ~ d<log X_i, log X_j>.
struct CovarianceEstimate {
  Matrix sigma;
  std::size_t window = 0;
};

// Descending order; equal prices go to the lower index first.
RankState compute_ranks(std::span<const double> prices);
// Same ordering rule on arbitrary finite values (e.g. log prices).
RankState rank_values(std::span<const double> values);

WeightVector market_weights(std::span<const double> prices);
// Market weights from log prices, computed without overflow.
WeightVector market_weights_from_log(std::span<const double> log_prices);

// sigma = (1 / (T dt)) sum_t dx_t dx_t', uncentered. Needs T >= 2 rows.
CovarianceEstimate estimate_covariance(const Matrix& log_increments, double dt);
// estimate_covariance applied to the increments of log mu.
CovarianceEstimate relative_covariance(const Matrix& mu_path, double dt);
// Single-increment realized covariance dx dx' / dt, used by per-step rules.
CovarianceEstimate instantaneous_covariance(std::span<const double> increment, double dt);

// Dated panel of strictly positive prices held as log prices.
//
// Each asset has a first available date and is present at every later date.
// Log prices are stored as a per-asset additive level plus the raw series, so
// relevelling an asset never perturbs its increments.
class PricePanel {
 public:
  PricePanel() = default;
  PricePanel(std::vector<std::string> assets, std::vector<int> dates, double dt);

  // Installs log prices for dates [start, num_dates()).
  void set_log_series(std::size_t asset, std::size_t start, std::span<const double> log_prices);

  std::size_t num_assets() const { return assets_.size(); }
  std::size_t num_dates() const { return dates_.size(); }
  const std::vector<std::string>& assets() const { return assets_; }
  const std::vector<int>& dates() const { return dates_; }
  double dt() const { return dt_; }

  std::size_t start(std::size_t asset) const { return starts_[asset]; }
  bool available(std::size_t asset, std::size_t t) const {
    return t >= starts_[asset] && starts_[asset] < dates_.size();
  }

  double log_price(std::size_t asset, std::size_t t) const;
  double price(std::size_t asset, std::size_t t) const;
  // raw(t + 1) - raw(t); independent of the asset's level.
  double log_increment(std::size_t asset, std::size_t t) const;

  double level(std::size_t asset) const { return levels_[asset]; }
  void set_level(std::size_t asset, double level) { levels_[asset] = level; }

  std::vector<std::size_t> active(std::size_t t) const;
  // True when every asset is available on [t0, t1].
  bool fixed_n(std::size_t t0, std::size_t t1) const;
  std::vector<double> log_prices_at(std::size_t t) const;  // all assets must be available

  std::optional<std::size_t> find_date(int date) const;
  std::optional<std::size_t> find_asset(const std::string& name) const;

  // Dates [t0, t1] inclusive; assets keep their identities and levels.
  PricePanel window(std::size_t t0, std::size_t t1) const;
  // Same data with assets reordered: result asset k is this panel's order[k].
  PricePanel reorder(std::span<const std::size_t> order) const;

  // Throws DataValidation if any invariant is broken.
  void validate() const;

 private:
  double raw(std::size_t asset, std::size_t t) const { return raw_[t * assets_.size() + asset]; }

  std::vector<std::string> assets_;
  std::vector<int> dates_;
  double dt_ = 1.0 / 12.0;
  std::vector<std::size_t> starts_;
  std::vector<double> levels_;
  std::vector<double> raw_;  // dates x assets; NaN before an asset's start
};

}  // namespace sptlab
