// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sptlab/backtest.hpp"
#include "sptlab/cli.hpp"
#include "sptlab/decomposition.hpp"
#include "sptlab/estimation.hpp"
#include "sptlab/fgp.hpp"
#include "sptlab/first_order.hpp"
#include "sptlab/futures.hpp"
#include "sptlab/months.hpp"
#include "sptlab/policies.hpp"

namespace fs = std::filesystem;
using namespace sptlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string list(const std::vector<double>& v, const char* f = "%.4f") {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(f, v[k]);
  return s + ")";
}

Matrix mu_path(const PricePanel& p) {
  Matrix mu(p.num_dates(), p.num_assets());
  for (std::size_t t = 0; t < p.num_dates(); ++t) {
    const auto w = market_weights_from_log(p.log_prices_at(t));
    for (std::size_t i = 0; i < w.size(); ++i) mu(t, i) = w[i];
  }
  return mu;
}

std::vector<double> log_increments(const Matrix& mu, std::size_t t) {
  std::vector<double> a(mu.cols());
  for (std::size_t i = 0; i < mu.cols(); ++i) a[i] = std::log(mu(t + 1, i)) - std::log(mu(t, i));
  return a;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Criteria 1 and 2 share one simulation.
const FirstOrderParams kAc1{{-0.04, -0.02, 0.0, 0.02, 0.04}, {0.2, 0.2, 0.2, 0.2, 0.2}};
constexpr std::uint64_t kAc1Seed = 1;

struct Ac1Run {
  FirstOrderEstimate est;
  double seconds = 0.0;
};

const Ac1Run& ac1_run() {
  static const Ac1Run run = [] {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig c;
    c.steps = 200000;
    c.dt = 1.0 / 252;
    c.seed = kAc1Seed;
    Ac1Run r;
    r.est = estimate_first_order(simulate(kAc1, c));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return run;
}

Outcome ac1() {
  const auto& run = ac1_run();
  const auto lam = theoretical_local_times(kAc1);
  const auto var = theoretical_gap_variances(kAc1);
  Outcome o;
  std::vector<double> lam_err, var_err;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    lam_err.push_back(run.est.lambda[k] / lam[k] - 1.0);
    var_err.push_back(run.est.gap_var[k] / var[k] - 1.0);
    o.pass = o.pass && std::fabs(lam_err.back()) <= 0.05 && std::fabs(var_err.back()) <= 0.05;
  }
  o.pass = o.pass && run.seconds < 60.0;
  o.detail = "lambda " + list(run.est.lambda) + " rel.err " + list(lam_err, "%+.3f") +
             "; gap var " + list(run.est.gap_var) + " rel.err " + list(var_err, "%+.3f") + "; " +
             fmt("%.1f s", run.seconds);
  return o;
}

Outcome ac2() {
  const auto& est = ac1_run().est;
  Outcome o;
  std::vector<double> g_err, s_err;
  for (std::size_t k = 1; k + 1 < est.n; ++k) {
    g_err.push_back(est.g[k] - kAc1.g[k]);
    s_err.push_back(est.sigma[k] / kAc1.sigma[k] - 1.0);
    o.pass = o.pass && std::fabs(g_err.back()) <= 0.005 && std::fabs(s_err.back()) <= 0.05;
  }
  const double total = std::accumulate(est.g.begin(), est.g.end(), 0.0);
  o.pass = o.pass && std::fabs(total) <= 1e-12;
  o.detail = "interior g err " + list(g_err, "%+.4f") + ", sigma rel.err " + list(s_err, "%+.3f") +
             fmt(", sum g %.1e", total);
  return o;
}

Outcome ac3() {
  const FirstOrderParams params = kAc1;
  const std::size_t paths = 200;
  SimConfig c;
  c.steps = 480;
  c.dt = 1.0 / 12;
  c.seed = 3;
  c.paths = paths;
  const std::vector<WeightPolicy> policies{policy::Market{}, policy::Reverse{}};
  const auto diff = simulate_paths(params, c, [&](std::size_t, const PricePanel& panel) {
    const auto r = run_backtest(panel, policies);
    return r.policies[1].cumulative.back() - r.policies[0].cumulative.back();
  });
  const auto wins = std::count_if(diff.begin(), diff.end(), [](double d) { return d > 0.0; });
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / paths;
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double tstat = mean / (std::sqrt(ss / (paths - 1)) / std::sqrt(static_cast<double>(paths)));
  const double share = static_cast<double>(wins) / paths;
  return {share >= 0.95 && mean > 0.0 && tstat > 3.0,
          fmt("reverse ahead in %.1f%% of paths", 100 * share) +
              fmt(", mean difference %.4f", mean) + fmt(", t = %.2f", tstat)};
}

// log(Z_pi / Z_mu)(T) minus the generating-function term and twice the
// sub-market excess growth, for the two-asset swap portfolio.
double swap_residual(const PricePanel& panel) {
  const Matrix mu = mu_path(panel);
  const auto gen = swap_generator(0, 1);
  double rel = 0.0, drift = 0.0;
  for (std::size_t t = 0; t + 1 < mu.rows(); ++t) {
    const WeightVector m(std::vector<double>(mu.row(t).begin(), mu.row(t).end()));
    const auto pi = swap_weights(m, 0, 1);
    double growth = 0.0;
    for (std::size_t i = 0; i < 2; ++i) growth += pi[i] * mu(t + 1, i) / mu(t, i);
    rel += std::log(growth);
    const auto a = log_increments(mu, t);
    const double eta = m[0] / (m[0] + m[1]);
    drift += eta * (1.0 - eta) * (a[0] - a[1]) * (a[0] - a[1]);
  }
  const double dlogS = std::log(gen.value(mu.row(mu.rows() - 1))) - std::log(gen.value(mu.row(0)));
  return rel - dlogS - drift;
}

Outcome ac4() {
  const FirstOrderParams params{{-0.05, 0.05}, {0.2, 0.2}};
  const std::size_t seeds = 20;
  std::vector<double> coarse, fine;
  for (std::uint64_t s = 1; s <= seeds; ++s) {
    SimConfig c;
    c.seed = s;
    c.dt = 1.0 / 504;
    c.steps = 5040;
    fine.push_back(swap_residual(simulate(params, c)));
    c.dt = 1.0 / 252;
    c.steps = 2520;
    c.brownian_substeps = 2;
    coarse.push_back(swap_residual(simulate(params, c)));
  }
  double worst = 0.0;
  for (double e : coarse) worst = std::max(worst, std::fabs(e));
  const double ratio = rms(coarse) / rms(fine);
  return {worst < 5e-3 && ratio >= 1.5 && ratio <= 2.5,
          fmt("max |residual| at dt=1/252 %.2e", worst) + fmt(" over %.0f paths", seeds) +
              fmt(", rms ratio 1/252 : 1/504 = %.2f", ratio)};
}

Outcome ac5() {
  const FirstOrderParams params{{-0.05, 0.0, 0.05}, {0.2, 0.25, 0.3}};
  const std::size_t seeds = 200;
  const std::vector<std::size_t> substeps{4, 2, 1};
  std::vector<double> s_rms, t_rms;
  for (std::size_t r : substeps) {
    std::vector<double> s_err, t_err;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      SimConfig c;
      c.seed = seed;
      c.dt = static_cast<double>(r) / 48.0;
      c.steps = 40 * 48 / r;
      c.brownian_substeps = r;
      const Matrix mu = mu_path(simulate(params, c));
      const auto gen = swap_generator(0, 1);
      Matrix pi(mu.rows(), 3);
      double theta = 0.0;
      for (std::size_t t = 0; t < mu.rows(); ++t) {
        const WeightVector m(std::vector<double>(mu.row(t).begin(), mu.row(t).end()));
        const auto w = fgp_weights(gen, m);
        for (std::size_t i = 0; i < 3; ++i) pi(t, i) = w[i];
        if (t + 1 < mu.rows()) {
          theta += fgp_drift_increment(gen, m,
                                       instantaneous_covariance(log_increments(mu, t), c.dt), c.dt);
        }
      }
      const auto d = decompose(pi, mu, c.dt);
      s_err.push_back(d.structural - (std::log(gen.value(mu.row(mu.rows() - 1))) -
                                      std::log(gen.value(mu.row(0)))));
      t_err.push_back(d.trading - theta);
    }
    s_rms.push_back(rms(s_err));
    t_rms.push_back(rms(t_err));
  }
  Outcome o;
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < substeps.size(); ++k) {
    for (double q : {s_rms[k] / s_rms[k + 1], t_rms[k] / t_rms[k + 1]}) {
      ratios.push_back(q);
      o.pass = o.pass && q >= 1.5 && q <= 2.5;
    }
  }
  o.detail = "rms structural err " + list(s_rms, "%.2e") + ", trading err " + list(t_rms, "%.2e") +
             " at dt 1/12,1/24,1/48; halving ratios " + list(ratios, "%.2f");
  return o;
}

Outcome ac6() {
  std::mt19937_64 rng(6);
  std::exponential_distribution<double> ex(1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  double min_gamma = INFINITY;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + trial % 20, k = 1 + trial % 7;
    std::vector<double> w(n);
    for (double& x : w) x = ex(rng);
    const auto pi = WeightVector::normalize(w);
    std::vector<double> a(n * k);
    for (double& x : a) x = z(rng);
    CovarianceEstimate cov{Matrix(n, n), 1};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < k; ++r) cov.sigma(i, j) += a[i * k + r] * a[j * k + r];
      }
    }
    min_gamma = std::min(min_gamma, excess_growth_rate(pi, cov));
  }

  double worst_identity = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.steps = 2520;
    const auto panel = simulate(kAc1, c);
    const Matrix mu = mu_path(panel);
    std::vector<double> gamma(c.steps);
    for (std::size_t t = 0; t < c.steps; ++t) {
      std::vector<double> a(mu.cols());
      for (std::size_t i = 0; i < mu.cols(); ++i) a[i] = panel.log_increment(i, t);
      gamma[t] = excess_growth_step(mu.row(t), a) / c.dt;
    }
    const double years = static_cast<double>(c.steps) * c.dt;
    worst_identity =
        std::max(worst_identity, std::fabs(market_identity_residual(mu, gamma, c.dt)) / years);
  }

  double worst_strat = 0.0, worst_ito = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 2 + static_cast<std::size_t>(trial) * 25;
    std::vector<double> x(len), y(len);
    double xs = z(rng), ys = z(rng);
    for (std::size_t t = 0; t < len; ++t) {
      x[t] = (xs += 0.1 * z(rng));
      y[t] = (ys += 0.1 * z(rng));
    }
    worst_strat = std::max(worst_strat, std::fabs(stratonovich_integral(x, x) -
                                                  0.5 * (x.back() * x.back() - x[0] * x[0])));
    worst_ito = std::max(worst_ito, std::fabs(stratonovich_integral(y, x) - ito_integral(y, x) -
                                              0.5 * cross_variation(y, x)));
  }
  return {min_gamma >= 0.0 && worst_identity < 1e-3 && worst_strat <= 1e-12 && worst_ito <= 1e-12,
          fmt("min gamma* %.3e", min_gamma) + fmt(", market identity %.2e /yr", worst_identity) +
              fmt(", Stratonovich %.1e", worst_strat) + fmt(", midpoint-Ito %.1e", worst_ito)};
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

Outcome ac7() {
  const fs::path golden = fs::path(SPTLAB_TEST_DATA) / "golden";
  const fs::path work =
      fs::temp_directory_path() / ("sptlab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  RunConfig c;
  c.out = work.string();
  cmd_fixture(c);
  c.quotes = (work / "fixture_quotes.csv").string();
  c.out = (work / "ingest").string();
  cmd_ingest(c);
  c.panel = (work / "ingest" / "implied_panel.csv").string();
  c.out = (work / "backtest").string();
  cmd_backtest(c);

  std::size_t files = 0, matched = 0;
  bool fixture_same =
      same_bytes(work / "fixture_quotes.csv", fs::path(SPTLAB_TEST_DATA) / "fixture_quotes.csv");
  for (const char* stage : {"ingest", "backtest"}) {
    for (const auto& entry : fs::directory_iterator(golden / stage)) {
      ++files;
      if (same_bytes(entry.path(), work / stage / entry.path().filename())) ++matched;
    }
  }

  const QuoteBook book(synthetic_fixture_quotes());
  std::vector<ImpliedSeries> series;
  for (const auto& name : book.commodities()) series.push_back(build_implied_series(book, name));
  const auto panel = normalize_entries(series);
  const auto carry = carry_matrix(book, panel);
  const std::size_t wheat = *panel.find_asset("wheat");
  double worst = 0.0;
  std::size_t months = 0;
  for (std::size_t t = 0; t < carry.rows(); ++t) {
    if (std::isnan(carry(t, wheat))) continue;
    worst = std::max(worst, std::fabs(carry(t, wheat) + 0.03));
    ++months;
  }
  fs::remove_all(work);
  return {fixture_same && files > 0 && matched == files && months > 0 && worst <= 1e-12,
          std::to_string(matched) + "/" + std::to_string(files) + " golden files identical" +
              (fixture_same ? "" : ", fixture differs") +
              fmt(", wheat carry max |C+0.03| %.1e", worst) + " over " + std::to_string(months) +
              " months"};
}

Outcome ac8() {
  std::ifstream in(fs::path(SPTLAB_TEST_DATA) / "commodity_start_dates.csv");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  std::vector<int> starts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    names.push_back(line.substr(0, line.rfind(',', line.rfind(',') - 1)));
    starts.push_back(parse_month(line.substr(line.rfind(',') + 1)));
  }
  const auto cal = eligibility(names, starts);
  const std::string got = cal.portfolio_start ? format_month(*cal.portfolio_start) : "none";
  return {got == "1977-11", std::to_string(names.size()) + " start dates, portfolio start " + got};
}

Outcome ac9() {
  const std::size_t n = 10;
  FirstOrderParams truth;
  for (std::size_t k = 0; k < n; ++k) {
    truth.g.push_back(0.005 * (2.0 * static_cast<double>(k) - static_cast<double>(n - 1)));
    truth.sigma.push_back(0.2);
  }
  SimConfig c;
  c.dt = 1.0 / 12;
  c.steps = 12 * 500;
  c.seed = 9;
  const auto panel = simulate(truth, c);
  const auto est = estimate_first_order(panel);
  const auto observed = rank_size_curve(panel);
  if (!validate_params(est.params()).empty()) {
    return {false, "estimated parameters are not a valid model"};
  }
  SimConfig re = c;
  re.seed = 10;
  re.paths = 1000;
  re.initial_log_prices = panel.log_prices_at(0);
  const auto simulated = simulated_rank_size_curve(est.params(), re);
  double mad = 0.0;
  for (std::size_t k = 0; k < n; ++k) mad += std::fabs(observed[k] - simulated[k]);
  mad /= static_cast<double>(n);
  return {mad < 0.05, fmt("mean absolute deviation %.4f", mad) + " (observed " +
                          list(observed, "%.3f") + ", simulated " + list(simulated, "%.3f") + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 first-order local times and gap variances", ac1},
      {"AC2 round-trip parameter recovery", ac2},
      {"AC3 reverse weights beat the market", ac3},
      {"AC4 two-asset swap identity and step convergence", ac4},
      {"AC5 structural/trading convergence for the swap generator", ac5},
      {"AC6 property suite", ac6},
      {"AC7 futures pipeline golden files", ac7},
      {"AC8 eligibility start month", ac8},
      {"AC9 rank-size self-consistency", ac9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
