#include "sptlab/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define SPTLAB_HAVE_NEON 1
#include <arm_neon.h>
#else
#define SPTLAB_HAVE_NEON 0
#endif

namespace sptlab::kernels {

#if SPTLAB_HAVE_NEON
namespace {

// Two float64x2 registers carry reference lanes {0,1} and {2,3}.

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lanes[4];
  vst1q_f64(lanes, lo);
  vst1q_f64(lanes + 2, hi);
  for (std::size_t l = 0; i + l < n; ++l) lanes[l] += a[i + l] * b[i + l];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot3_neon(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vld1q_f64(c + i)));
    hi = vaddq_f64(
        hi, vmulq_f64(vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)), vld1q_f64(c + i + 2)));
  }
  double lanes[4];
  vst1q_f64(lanes, lo);
  vst1q_f64(lanes + 2, hi);
  for (std::size_t l = 0; i + l < n; ++l) lanes[l] += (a[i + l] * b[i + l]) * c[i + l];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void rank1_update_neon(double* c, const double* x, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scale * x[i];
    const float64x2_t vs = vdupq_n_f64(s);
    double* row = c + i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      vst1q_f64(row + j, vaddq_f64(vld1q_f64(row + j), vmulq_f64(vs, vld1q_f64(x + j))));
    }
    for (; j < n; ++j) row[j] += s * x[j];
  }
}

void euler_step_neon(double* x, const double* drift, const double* vol, const double* noise,
                     std::size_t n, double dt, double sqrt_dt) {
  const float64x2_t vdt = vdupq_n_f64(dt);
  const float64x2_t vsq = vdupq_n_f64(sqrt_dt);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vmulq_f64(vld1q_f64(drift + i), vdt);
    const float64x2_t s = vmulq_f64(vmulq_f64(vld1q_f64(vol + i), vsq), vld1q_f64(noise + i));
    vst1q_f64(x + i, vaddq_f64(vld1q_f64(x + i), vaddq_f64(d, s)));
  }
  for (; i < n; ++i) x[i] += drift[i] * dt + (vol[i] * sqrt_dt) * noise[i];
}

const Table kNeon{dot_neon, dot3_neon, rank1_update_neon, euler_step_neon};

}  // namespace

const Table* neon_table() { return &kNeon; }
#else
const Table* neon_table() { return nullptr; }
#endif

}  // namespace sptlab::kernels
