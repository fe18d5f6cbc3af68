#include "sptlab/decomposition.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"

namespace sptlab {
namespace {

void check_same(std::size_t a, std::size_t b, const char* what) {
  require(a == b, ErrorKind::InvalidInput, std::string(what) + ": misaligned inputs");
}

std::vector<double> log_increments_row(const Matrix& mu, std::size_t t) {
  std::vector<double> a(mu.cols());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::log(mu(t + 1, i)) - std::log(mu(t, i));
  return a;
}

}  // namespace

double excess_growth_rate(std::span<const double> pi, const CovarianceEstimate& sigma) {
  const std::size_t n = pi.size();
  check_same(sigma.sigma.rows(), n, "excess_growth_rate");
  check_same(sigma.sigma.cols(), n, "excess_growth_rate");
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) diag += pi[i] * sigma.sigma(i, i);
  return 0.5 * (diag - kernels::quad_form(pi, sigma.sigma.data()));
}

double excess_growth_rate(const WeightVector& pi, const CovarianceEstimate& sigma) {
  return excess_growth_rate(pi.values(), sigma);
}

double excess_growth_step(std::span<const double> pi, std::span<const double> a) {
  check_same(pi.size(), a.size(), "excess_growth_step");
  const double mean = kernels::dot(pi, a);
  // Centering first keeps the difference of squares from cancelling.
  double v = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - mean;
    v += pi[i] * d * d;
  }
  double wsum = 0.0;
  for (double w : pi) wsum += w;
  // sum pi (a - m)^2 = sum pi a^2 - m^2 when sum pi = 1
  return 0.5 * (v + (1.0 - wsum) * mean * mean);
}

double portfolio_log_return(const Matrix& pi_path, const Matrix& log_returns,
                            std::span<const double> gamma_star, double dt) {
  check_same(pi_path.rows(), log_returns.rows(), "portfolio_log_return");
  check_same(pi_path.cols(), log_returns.cols(), "portfolio_log_return");
  check_same(pi_path.rows(), gamma_star.size(), "portfolio_log_return");
  double total = 0.0;
  for (std::size_t t = 0; t < pi_path.rows(); ++t) {
    total += kernels::dot(pi_path.row(t), log_returns.row(t)) + gamma_star[t] * dt;
  }
  return total;
}

double relative_log_return(const Matrix& pi_path, const Matrix& mu_path,
                           std::span<const double> gamma_star, double dt) {
  check_same(pi_path.rows() + 1, mu_path.rows(), "relative_log_return");
  check_same(pi_path.cols(), mu_path.cols(), "relative_log_return");
  check_same(pi_path.rows(), gamma_star.size(), "relative_log_return");
  double total = 0.0;
  for (std::size_t t = 0; t < pi_path.rows(); ++t) {
    const auto a = log_increments_row(mu_path, t);
    total += kernels::dot(pi_path.row(t), a) + gamma_star[t] * dt;
  }
  return total;
}

double market_identity_residual(const Matrix& mu_path, std::span<const double> gamma_star_mu,
                                double dt) {
  require(mu_path.rows() >= 1, ErrorKind::InvalidInput, "market_identity_residual: empty path");
  Matrix pi(mu_path.rows() - 1, mu_path.cols());
  for (std::size_t t = 0; t + 1 < mu_path.rows(); ++t) {
    for (std::size_t i = 0; i < mu_path.cols(); ++i) pi(t, i) = mu_path(t, i);
  }
  return relative_log_return(pi, mu_path, gamma_star_mu, dt);
}

double stratonovich_integral(std::span<const double> y, std::span<const double> x) {
  check_same(y.size(), x.size(), "stratonovich_integral");
  require(y.size() >= 2, ErrorKind::InsufficientData, "stratonovich_integral: need two points");
  double s = 0.0;
  for (std::size_t t = 0; t + 1 < y.size(); ++t) s += 0.5 * (y[t] + y[t + 1]) * (x[t + 1] - x[t]);
  return s;
}

double ito_integral(std::span<const double> y, std::span<const double> x) {
  check_same(y.size(), x.size(), "ito_integral");
  require(y.size() >= 2, ErrorKind::InsufficientData, "ito_integral: need two points");
  double s = 0.0;
  for (std::size_t t = 0; t + 1 < y.size(); ++t) s += y[t] * (x[t + 1] - x[t]);
  return s;
}

double cross_variation(std::span<const double> y, std::span<const double> x) {
  check_same(y.size(), x.size(), "cross_variation");
  require(y.size() >= 2, ErrorKind::InsufficientData, "cross_variation: need two points");
  double s = 0.0;
  for (std::size_t t = 0; t + 1 < y.size(); ++t) s += (y[t + 1] - y[t]) * (x[t + 1] - x[t]);
  return s;
}

ReturnDecomposition decompose(const Matrix& pi_path, const Matrix& mu_path, double dt) {
  check_same(pi_path.rows(), mu_path.rows(), "decompose");
  check_same(pi_path.cols(), mu_path.cols(), "decompose");
  require(mu_path.rows() >= 2, ErrorKind::InsufficientData, "decompose: need two dates");
  require(dt > 0.0, ErrorKind::InvalidInput, "decompose: dt must be positive");
  const std::size_t steps = mu_path.rows() - 1;
  const std::size_t n = mu_path.cols();

  ReturnDecomposition d;
  d.relative_cum.assign(steps + 1, 0.0);
  d.structural_cum.assign(steps + 1, 0.0);
  d.trading_cum.assign(steps + 1, 0.0);
  d.gamma_star_cum.assign(steps + 1, 0.0);

  double cross = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const auto a = log_increments_row(mu_path, t);
    double growth = 0.0;
    double strat = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      growth += pi_path(t, i) * (mu_path(t + 1, i) / mu_path(t, i));
      strat += 0.5 * (pi_path(t, i) + pi_path(t + 1, i)) * a[i];
      cross += (pi_path(t + 1, i) - pi_path(t, i)) * a[i];
    }
    require(growth > 0.0 && std::isfinite(growth), ErrorKind::Evaluation,
            "decompose: non-positive wealth ratio");
    d.relative += std::log(growth);
    d.structural += strat;
    d.excess_growth_integral += excess_growth_step(pi_path.row(t), a);
    d.relative_cum[t + 1] = d.relative;
    d.structural_cum[t + 1] = d.structural;
    d.trading_cum[t + 1] = d.relative - d.structural;
    d.gamma_star_cum[t + 1] = d.excess_growth_integral;
  }
  d.trading = d.relative - d.structural;
  d.trading_crossvar = -0.5 * cross + d.excess_growth_integral;
  d.discrepancy = d.trading - d.trading_crossvar;
  return d;
}

std::vector<double> gamma_star_rolling(const Matrix& pi_path, const Matrix& log_increments,
                                       double dt, std::size_t window) {
  check_same(pi_path.rows(), log_increments.rows(), "gamma_star_rolling");
  check_same(pi_path.cols(), log_increments.cols(), "gamma_star_rolling");
  require(window >= 1, ErrorKind::InvalidInput, "gamma_star_rolling: window must be positive");
  require(dt > 0.0, ErrorKind::InvalidInput, "gamma_star_rolling: dt must be positive");
  const std::size_t n = pi_path.cols();
  std::vector<double> out(pi_path.rows());
  for (std::size_t t = 0; t < pi_path.rows(); ++t) {
    const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
    CovarianceEstimate s{Matrix(n, n), t + 1 - first};
    for (std::size_t u = first; u <= t; ++u) {
      kernels::rank1_update(s.sigma.data(), log_increments.row(u), 1.0);
    }
    const double scale = 1.0 / (static_cast<double>(s.window) * dt);
    for (double& v : s.sigma.data()) v *= scale;
    out[t] = excess_growth_rate(pi_path.row(t), s);
  }
  return out;
}

std::vector<double> gamma_star_residual(std::span<const double> log_wealth_increments,
                                        const Matrix& pi_path, const Matrix& log_increments,
                                        double dt) {
  check_same(log_wealth_increments.size(), pi_path.rows(), "gamma_star_residual");
  check_same(pi_path.rows(), log_increments.rows(), "gamma_star_residual");
  check_same(pi_path.cols(), log_increments.cols(), "gamma_star_residual");
  std::vector<double> out(pi_path.rows());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = (log_wealth_increments[t] - kernels::dot(pi_path.row(t), log_increments.row(t))) / dt;
  }
  return out;
}

void write_decomposition_csv(std::ostream& out, std::span<const std::string> dates,
                             const ReturnDecomposition& d) {
  check_same(dates.size(), d.relative_cum.size(), "write_decomposition_csv");
  out << "date,relative_logret,structural,trading,gamma_star_cum\n";
  char buf[160];
  for (std::size_t t = 0; t < dates.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g", d.relative_cum[t],
                  d.structural_cum[t], d.trading_cum[t], d.gamma_star_cum[t]);
    out << dates[t] << ',' << buf << '\n';
  }
}

}  // namespace sptlab
