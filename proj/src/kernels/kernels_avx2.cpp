#include "sptlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SPTLAB_HAVE_AVX2 1
#include <immintrin.h>
#else
#define SPTLAB_HAVE_AVX2 0
#endif

namespace sptlab::kernels {

#if SPTLAB_HAVE_AVX2
namespace {

#define SPTLAB_AVX2 __attribute__((target("avx2")))

// One __m256d holds the four reference lanes; the tail is folded into the
// stored lanes exactly as the scalar kernel does.

SPTLAB_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t l = 0; i + l < n; ++l) lanes[l] += a[i + l] * b[i + l];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

SPTLAB_AVX2 double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(ab, _mm256_loadu_pd(c + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t l = 0; i + l < n; ++l) lanes[l] += (a[i + l] * b[i + l]) * c[i + l];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

SPTLAB_AVX2 void rank1_update_avx2(double* c, const double* x, std::size_t n, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s = scale * x[i];
    const __m256d vs = _mm256_set1_pd(s);
    double* row = c + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + j));
      _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), prod));
    }
    for (; j < n; ++j) row[j] += s * x[j];
  }
}

SPTLAB_AVX2 void euler_step_avx2(double* x, const double* drift, const double* vol,
                                 const double* noise, std::size_t n, double dt, double sqrt_dt) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vsq = _mm256_set1_pd(sqrt_dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_mul_pd(_mm256_loadu_pd(drift + i), vdt);
    const __m256d s =
        _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(vol + i), vsq), _mm256_loadu_pd(noise + i));
    _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_add_pd(d, s)));
  }
  for (; i < n; ++i) x[i] += drift[i] * dt + (vol[i] * sqrt_dt) * noise[i];
}

#undef SPTLAB_AVX2

const Table kAvx2{dot_avx2, dot3_avx2, rank1_update_avx2, euler_step_avx2};

}  // namespace

const Table* avx2_table() { return &kAvx2; }
#else
const Table* avx2_table() { return nullptr; }
#endif

}  // namespace sptlab::kernels
