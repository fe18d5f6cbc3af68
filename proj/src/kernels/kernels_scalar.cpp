#include "sptlab/kernels.hpp"

// Scalar reference kernels. The lane-blocked accumulation below is the
// canonical summation order that every vector variant must reproduce.

namespace sptlab::kernels {
namespace {

constexpr std::size_t kLanes = 4;

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += a[i + l] * b[i + l];
  }
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += a[i + l] * b[i + l];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
  double acc[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += (a[i + l] * b[i + l]) * c[i + l];
  }
  for (std::size_t l = 0; i + l < n; ++l) acc[l] += (a[i + l] * b[i + l]) * c[i + l];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

void rank1_update_scalar(double* c, const double* x, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scale * x[i];
    double* row = c + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] += s * x[j];
  }
}

void euler_step_scalar(double* x, const double* drift, const double* vol, const double* noise,
                       std::size_t n, double dt, double sqrt_dt) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += drift[i] * dt + (vol[i] * sqrt_dt) * noise[i];
  }
}

const Table kScalar{dot_scalar, dot3_scalar, rank1_update_scalar, euler_step_scalar};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace sptlab::kernels
