#include "sptlab/fgp.hpp"

#include <cmath>

#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"

namespace sptlab {
namespace {

void check_mu(const WeightVector& mu, const char* who) {
  for (double m : mu) {
    require(m > 0.0, ErrorKind::InvalidInput,
            std::string(who) + ": market weights must be positive");
  }
}

void check_finite(std::span<const double> v, const std::string& what) {
  for (double x : v) {
    require(std::isfinite(x), ErrorKind::Evaluation, what + " is not finite");
  }
}

}  // namespace

GeneratingFunction GeneratingFunction::analytic(std::string name, ValueFn value, GradLogFn grad_log,
                                                HessianFn hessian) {
  require(value && grad_log && hessian, ErrorKind::InvalidInput,
          "analytic generator needs value, gradient, and Hessian");
  GeneratingFunction g;
  g.name_ = std::move(name);
  g.value_ = std::move(value);
  g.grad_log_ = std::move(grad_log);
  g.hessian_ = std::move(hessian);
  return g;
}

GeneratingFunction GeneratingFunction::numeric(std::string name, ValueFn value, double grad_step,
                                               double hessian_step) {
  require(static_cast<bool>(value), ErrorKind::InvalidInput, "generator needs a value function");
  require(grad_step > 0.0 && hessian_step > 0.0, ErrorKind::InvalidInput,
          "finite-difference steps must be positive");
  GeneratingFunction g;
  g.name_ = std::move(name);
  g.value_ = std::move(value);
  g.grad_step_ = grad_step;
  g.hessian_step_ = hessian_step;
  return g;
}

double GeneratingFunction::value(std::span<const double> x) const {
  const double v = value_(x);
  require(std::isfinite(v) && v > 0.0, ErrorKind::Evaluation,
          "generating function '" + name_ + "' must be finite and positive");
  return v;
}

std::vector<double> GeneratingFunction::grad_log(std::span<const double> x) const {
  if (!grad_log_) return grad_log_numeric(x);
  std::vector<double> g(x.size());
  grad_log_(x, g);
  check_finite(g, "gradient of '" + name_ + "'");
  return g;
}

Matrix GeneratingFunction::hessian(std::span<const double> x) const {
  if (!hessian_) return hessian_numeric(x);
  Matrix h(x.size(), x.size());
  hessian_(x, h.data());
  check_finite(h.data(), "Hessian of '" + name_ + "'");
  return h;
}

std::vector<double> GeneratingFunction::grad_log_numeric(std::span<const double> x) const {
  const std::size_t n = x.size();
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = grad_step_ * std::abs(x[i]);
    p[i] = x[i] + h;
    const double up = std::log(value(p));
    p[i] = x[i] - h;
    const double down = std::log(value(p));
    p[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  check_finite(g, "numeric gradient of '" + name_ + "'");
  return g;
}

Matrix GeneratingFunction::hessian_numeric(std::span<const double> x) const {
  const std::size_t n = x.size();
  std::vector<double> p(x.begin(), x.end());
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = hessian_step_ * std::abs(x[i]);
  const double center = value(p);
  Matrix out(n, n);
  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    p[i] += di;
    p[j] += dj;
    const double v = value(p);
    p[i] = x[i];
    p[j] = x[j];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = (at(i, h[i], i, 0.0) - 2.0 * center + at(i, -h[i], i, 0.0)) / (h[i] * h[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (at(i, h[i], j, h[j]) - at(i, h[i], j, -h[j]) - at(i, -h[i], j, h[j]) +
                        at(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  check_finite(out.data(), "numeric Hessian of '" + name_ + "'");
  return out;
}

GeneratingFunction constant_generator() {
  return GeneratingFunction::analytic(
      "constant", [](std::span<const double>) { return 1.0; },
      [](std::span<const double>, std::span<double> g) {
        for (double& v : g) v = 0.0;
      },
      [](std::span<const double>, std::span<double> h) {
        for (double& v : h) v = 0.0;
      });
}

GeneratingFunction swap_generator(std::size_t i, std::size_t j) {
  require(i != j, ErrorKind::InvalidInput, "swap generator needs two distinct assets");
  auto check = [i, j](std::span<const double> x) {
    require(i < x.size() && j < x.size(), ErrorKind::InvalidInput,
            "swap generator: asset index out of range");
  };
  return GeneratingFunction::analytic(
      "swap:" + std::to_string(i + 1) + "," + std::to_string(j + 1),
      [=](std::span<const double> x) {
        check(x);
        return x[i] * x[j] / (x[i] + x[j]);
      },
      [=](std::span<const double> x, std::span<double> g) {
        check(x);
        for (double& v : g) v = 0.0;
        const double s = x[i] + x[j];
        g[i] = 1.0 / x[i] - 1.0 / s;
        g[j] = 1.0 / x[j] - 1.0 / s;
      },
      [=](std::span<const double> x, std::span<double> h) {
        check(x);
        const std::size_t n = x.size();
        for (double& v : h) v = 0.0;
        const double s = x[i] + x[j];
        const double s3 = s * s * s;
        h[i * n + i] = -2.0 * x[j] * x[j] / s3;
        h[j * n + j] = -2.0 * x[i] * x[i] / s3;
        h[i * n + j] = 2.0 * x[i] * x[j] / s3;
        h[j * n + i] = h[i * n + j];
      });
}

GeneratingFunction geometric_mean_generator() {
  return GeneratingFunction::analytic(
      "geometric-mean",
      [](std::span<const double> x) {
        double acc = 0.0;
        for (double v : x) acc += std::log(v);
        return std::exp(acc / static_cast<double>(x.size()));
      },
      [](std::span<const double> x, std::span<double> g) {
        const double n = static_cast<double>(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) g[k] = 1.0 / (n * x[k]);
      },
      [](std::span<const double> x, std::span<double> h) {
        const std::size_t n = x.size();
        const double inv_n = 1.0 / static_cast<double>(n);
        double acc = 0.0;
        for (double v : x) acc += std::log(v);
        const double s = std::exp(acc * inv_n);
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            const double delta = a == b ? inv_n : 0.0;
            h[a * n + b] = s * (inv_n * inv_n - delta) / (x[a] * x[b]);
          }
        }
      });
}

WeightVector fgp_weights(const GeneratingFunction& s, const WeightVector& mu) {
  check_mu(mu, "fgp_weights");
  s.value(mu.values());
  const std::vector<double> g = s.grad_log(mu.values());
  const double centre = kernels::dot(mu.values(), g);
  std::vector<double> pi(mu.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pi[i] = (g[i] + 1.0 - centre) * mu[i];
    total += pi[i];
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorKind::Evaluation,
          "fgp_weights: generated weights do not sum to one");
  // The identity holds exactly in real arithmetic; this only absorbs rounding.
  return WeightVector::normalize(std::move(pi));
}

double fgp_drift_increment(const GeneratingFunction& s, const WeightVector& mu,
                           const CovarianceEstimate& tau, double dt) {
  check_mu(mu, "fgp_drift_increment");
  const std::size_t n = mu.size();
  require(tau.sigma.rows() == n && tau.sigma.cols() == n, ErrorKind::InvalidInput,
          "fgp_drift_increment: dimension mismatch");
  require(dt > 0.0, ErrorKind::InvalidInput, "fgp_drift_increment: dt must be positive");
  const double value = s.value(mu.values());
  const Matrix h = s.hessian(mu.values());
  Matrix weighted(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) weighted(i, j) = h(i, j) * tau.sigma(i, j);
  }
  return -kernels::quad_form(mu.values(), weighted.data()) / (2.0 * value) * dt;
}

double swap_drift_increment(const WeightVector& mu, std::size_t i, std::size_t j,
                            const CovarianceEstimate& tau, double dt) {
  const std::size_t n = mu.size();
  require(i != j, ErrorKind::InvalidInput, "swap_drift_increment: i and j must differ");
  require(i < n && j < n, ErrorKind::InvalidInput, "swap_drift_increment: index out of range");
  require(tau.sigma.rows() == n && tau.sigma.cols() == n, ErrorKind::InvalidInput,
          "swap_drift_increment: dimension mismatch");
  const double s = mu[i] + mu[j];
  require(s > 0.0, ErrorKind::InvalidInput, "swap_drift_increment: pair has zero weight");
  const double spread = tau.sigma(i, i) - 2.0 * tau.sigma(i, j) + tau.sigma(j, j);
  return mu[i] * mu[j] / (s * s) * spread * dt;
}

}  // namespace sptlab
