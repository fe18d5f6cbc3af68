#pragma once
// Functionally generated portfolios.
//
// A positive function S on the simplex generates the portfolio
//   pi_i = (D_i log S(mu) + 1 - sum_j mu_j D_j log S(mu)) mu_i
// whose log-return relative to the market is log S(mu) plus a drift process
//   dTheta = -1 / (2 S(mu)) sum_ij D_ij S(mu) mu_i mu_j tau_ij dt.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sptlab/market.hpp"

namespace sptlab {

class GeneratingFunction {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  // Writes D_i log S(x) into `out` (size n).
  using GradLogFn = std::function<void(std::span<const double>, std::span<double>)>;
  // Writes D_ij S(x) into `out` (row-major n x n).
  using HessianFn = std::function<void(std::span<const double>, std::span<double>)>;

  static constexpr double kGradStep = 1e-6;
  static constexpr double kHessianStep = 1e-4;

  static GeneratingFunction analytic(std::string name, ValueFn value, GradLogFn grad_log,
                                     HessianFn hessian);
  // Derivatives by central differences with relative steps h * x_i.
  static GeneratingFunction numeric(std::string name, ValueFn value, double grad_step = kGradStep,
                                    double hessian_step = kHessianStep);

  const std::string& name() const { return name_; }
  bool is_analytic() const { return static_cast<bool>(grad_log_); }

  // Throws Evaluation if S(x) is not finite and positive.
  double value(std::span<const double> x) const;
  std::vector<double> grad_log(std::span<const double> x) const;
  Matrix hessian(std::span<const double> x) const;

  // Finite-difference derivatives, available for every function.
  std::vector<double> grad_log_numeric(std::span<const double> x) const;
  Matrix hessian_numeric(std::span<const double> x) const;

 private:
  std::string name_;
  ValueFn value_;
  GradLogFn grad_log_;
  HessianFn hessian_;
  double grad_step_ = kGradStep;
  double hessian_step_ = kHessianStep;
};

// S(x) = 1; generates the market portfolio.
GeneratingFunction constant_generator();
// S(x) = x_i x_j / (x_i + x_j); generates the swap portfolio on {i, j}.
GeneratingFunction swap_generator(std::size_t i, std::size_t j);
// S(x) = (x_1 ... x_n)^(1/n); generates equal weights.
GeneratingFunction geometric_mean_generator();

WeightVector fgp_weights(const GeneratingFunction& s, const WeightVector& mu);

double fgp_drift_increment(const GeneratingFunction& s, const WeightVector& mu,
                           const CovarianceEstimate& tau, double dt);

// mu_i mu_j / (mu_i + mu_j)^2 (tau_ii - 2 tau_ij + tau_jj) dt
double swap_drift_increment(const WeightVector& mu, std::size_t i, std::size_t j,
                            const CovarianceEstimate& tau, double dt);

// Left-point accumulation of Theta over successive intervals.
class DriftAccumulator {
 public:
  void add(double increment, double dt) {
    theta_ += increment;
    elapsed_ += dt;
  }
  double theta() const { return theta_; }
  double elapsed() const { return elapsed_; }

 private:
  double theta_ = 0.0;
  double elapsed_ = 0.0;
};

}  // namespace sptlab
