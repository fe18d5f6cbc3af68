#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "sptlab/market.hpp"

namespace testutil {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) s += (x = e(rng) + 1e-3);
  for (double& x : v) x /= s;
  return v;
}

// A A' for a random n x k factor, so the result is PSD.
inline sptlab::Matrix random_psd(std::mt19937_64& rng, std::size_t n, std::size_t k,
                                 double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  std::vector<double> a(n * k);
  for (double& x : a) x = z(rng);
  sptlab::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < k; ++r) s += a[i * k + r] * a[j * k + r];
      m(i, j) = s;
    }
  }
  return m;
}

inline bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace testutil
