#include "sptlab/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"

namespace sptlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_positive(std::span<const double> prices, const char* who) {
  require(!prices.empty(), ErrorKind::InvalidInput, std::string(who) + ": empty price vector");
  for (double p : prices) {
    require(std::isfinite(p) && p > 0.0, ErrorKind::InvalidInput,
            std::string(who) + ": prices must be finite and strictly positive");
  }
}

void symmetrize(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  double sum = 0.0;
  for (double x : w_) {
    require(std::isfinite(x), ErrorKind::InvalidInput, "weights must be finite");
    sum += x;
  }
  require(!w_.empty() && std::abs(sum - 1.0) <= kSumTolerance, ErrorKind::InvalidInput,
          "weights must sum to one");
}

WeightVector WeightVector::normalize(std::vector<double> raw) {
  double sum = 0.0;
  for (double x : raw) sum += x;
  require(std::isfinite(sum) && sum > 0.0, ErrorKind::InvalidInput,
          "cannot normalize weights with non-positive total");
  for (double& x : raw) x /= sum;
  return WeightVector(std::move(raw));
}

RankState rank_values(std::span<const double> values) {
  const std::size_t n = values.size();
  RankState r;
  r.name_at.resize(n);
  std::iota(r.name_at.begin(), r.name_at.end(), std::size_t{0});
  std::stable_sort(r.name_at.begin(), r.name_at.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  r.rank_of.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.rank_of[r.name_at[k]] = k;
  return r;
}

RankState compute_ranks(std::span<const double> prices) {
  check_positive(prices, "compute_ranks");
  return rank_values(prices);
}

WeightVector market_weights(std::span<const double> prices) {
  check_positive(prices, "market_weights");
  return WeightVector::normalize({prices.begin(), prices.end()});
}

WeightVector market_weights_from_log(std::span<const double> log_prices) {
  require(!log_prices.empty(), ErrorKind::InvalidInput, "market_weights: empty input");
  const double top = *std::max_element(log_prices.begin(), log_prices.end());
  require(std::isfinite(top), ErrorKind::InvalidInput, "market_weights: non-finite log price");
  std::vector<double> x(log_prices.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(log_prices[i] - top);
  return WeightVector::normalize(std::move(x));
}

CovarianceEstimate estimate_covariance(const Matrix& log_increments, double dt) {
  const std::size_t periods = log_increments.rows();
  const std::size_t n = log_increments.cols();
  require(periods >= 2, ErrorKind::InsufficientData,
          "estimate_covariance: need at least two increments");
  require(dt > 0.0, ErrorKind::InvalidInput, "estimate_covariance: dt must be positive");
  CovarianceEstimate out{Matrix(n, n), periods};
  for (std::size_t t = 0; t < periods; ++t) {
    kernels::rank1_update(out.sigma.data(), log_increments.row(t), 1.0);
  }
  const double scale = 1.0 / (static_cast<double>(periods) * dt);
  for (double& v : out.sigma.data()) v *= scale;
  symmetrize(out.sigma);
  return out;
}

CovarianceEstimate relative_covariance(const Matrix& mu_path, double dt) {
  require(mu_path.rows() >= 1, ErrorKind::InsufficientData, "relative_covariance: empty path");
  Matrix inc(mu_path.rows() - 1, mu_path.cols());
  for (std::size_t t = 0; t + 1 < mu_path.rows(); ++t) {
    for (std::size_t i = 0; i < mu_path.cols(); ++i) {
      require(mu_path(t, i) > 0.0 && mu_path(t + 1, i) > 0.0, ErrorKind::InvalidInput,
              "relative_covariance: market weights must be positive");
      inc(t, i) = std::log(mu_path(t + 1, i)) - std::log(mu_path(t, i));
    }
  }
  return estimate_covariance(inc, dt);
}

CovarianceEstimate instantaneous_covariance(std::span<const double> increment, double dt) {
  require(dt > 0.0, ErrorKind::InvalidInput, "instantaneous_covariance: dt must be positive");
  const std::size_t n = increment.size();
  CovarianceEstimate out{Matrix(n, n), 1};
  kernels::rank1_update(out.sigma.data(), increment, 1.0 / dt);
  return out;
}

// ---------------------------------------------------------------------------

PricePanel::PricePanel(std::vector<std::string> assets, std::vector<int> dates, double dt)
    : assets_(std::move(assets)), dates_(std::move(dates)), dt_(dt) {
  require(dt_ > 0.0 && std::isfinite(dt_), ErrorKind::InvalidInput, "panel: dt must be positive");
  for (std::size_t t = 1; t < dates_.size(); ++t) {
    require(dates_[t] > dates_[t - 1], ErrorKind::DataValidation,
            "panel: dates must be strictly increasing");
  }
  starts_.assign(assets_.size(), dates_.size());
  levels_.assign(assets_.size(), 0.0);
  raw_.assign(assets_.size() * dates_.size(), kNaN);
}

void PricePanel::set_log_series(std::size_t asset, std::size_t start,
                                std::span<const double> log_prices) {
  require(asset < assets_.size(), ErrorKind::InvalidInput, "panel: asset index out of range");
  require(start < dates_.size() && log_prices.size() == dates_.size() - start,
          ErrorKind::DataValidation,
          "panel: series for '" + assets_[asset] + "' must run from its start to the last date");
  for (double v : log_prices) {
    require(std::isfinite(v), ErrorKind::DataValidation,
            "panel: non-finite or non-positive price for '" + assets_[asset] + "'");
  }
  const std::size_t n = assets_.size();
  for (std::size_t t = 0; t < dates_.size(); ++t) {
    raw_[t * n + asset] = t < start ? kNaN : log_prices[t - start];
  }
  starts_[asset] = start;
}

double PricePanel::log_price(std::size_t asset, std::size_t t) const {
  return levels_[asset] + raw(asset, t);
}

double PricePanel::price(std::size_t asset, std::size_t t) const {
  return std::exp(log_price(asset, t));
}

double PricePanel::log_increment(std::size_t asset, std::size_t t) const {
  return raw(asset, t + 1) - raw(asset, t);
}

std::vector<std::size_t> PricePanel::active(std::size_t t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    if (available(i, t)) out.push_back(i);
  }
  return out;
}

bool PricePanel::fixed_n(std::size_t t0, std::size_t t1) const {
  (void)t1;
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    if (!available(i, t0)) return false;
  }
  return true;
}

std::vector<double> PricePanel::log_prices_at(std::size_t t) const {
  std::vector<double> out(assets_.size());
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    require(available(i, t), ErrorKind::InvalidInput,
            "panel: asset '" + assets_[i] + "' not available at requested date");
    out[i] = log_price(i, t);
  }
  return out;
}

std::optional<std::size_t> PricePanel::find_date(int date) const {
  auto it = std::lower_bound(dates_.begin(), dates_.end(), date);
  if (it == dates_.end() || *it != date) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> PricePanel::find_asset(const std::string& name) const {
  auto it = std::find(assets_.begin(), assets_.end(), name);
  if (it == assets_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - assets_.begin());
}

PricePanel PricePanel::window(std::size_t t0, std::size_t t1) const {
  require(t0 <= t1 && t1 < dates_.size(), ErrorKind::InvalidInput, "panel: bad window");
  PricePanel out(assets_, std::vector<int>(dates_.begin() + t0, dates_.begin() + t1 + 1), dt_);
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    out.levels_[i] = levels_[i];
    if (starts_[i] > t1) continue;
    const std::size_t s = std::max(starts_[i], t0);
    std::vector<double> series;
    for (std::size_t t = s; t <= t1; ++t) series.push_back(raw(i, t));
    out.set_log_series(i, s - t0, series);
  }
  return out;
}

PricePanel PricePanel::reorder(std::span<const std::size_t> order) const {
  require(order.size() == assets_.size(), ErrorKind::InvalidInput, "panel: bad reorder");
  std::vector<std::string> names;
  for (std::size_t k : order) names.push_back(assets_.at(k));
  PricePanel out(names, dates_, dt_);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    out.levels_[k] = levels_[i];
    if (starts_[i] >= dates_.size()) continue;
    std::vector<double> series;
    for (std::size_t t = starts_[i]; t < dates_.size(); ++t) series.push_back(raw(i, t));
    out.set_log_series(k, starts_[i], series);
  }
  return out;
}

void PricePanel::validate() const {
  for (std::size_t t = 1; t < dates_.size(); ++t) {
    require(dates_[t] > dates_[t - 1], ErrorKind::DataValidation,
            "panel: dates must be strictly increasing");
  }
  for (std::size_t i = 0; i < assets_.size(); ++i) {
    require(starts_[i] < dates_.size(), ErrorKind::DataValidation,
            "panel: asset '" + assets_[i] + "' has no observations");
    for (std::size_t t = starts_[i]; t < dates_.size(); ++t) {
      require(std::isfinite(raw(i, t)), ErrorKind::DataValidation,
              "panel: gap in series for '" + assets_[i] + "'");
    }
  }
}

}  // namespace sptlab
