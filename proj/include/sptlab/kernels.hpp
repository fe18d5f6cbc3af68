#pragma once
// Data-parallel inner loops shared by the estimators and the simulator.
//
// Every kernel has a scalar reference implementation and optional AVX2/NEON
// variants chosen once at runtime. Reductions use a fixed four-lane blocked
// summation order in all variants, so a vector kernel returns exactly the
// same bits as the scalar reference. Results never depend on the host CPU.

#include <cstddef>
#include <span>

namespace sptlab::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct Table {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // c[i*n + j] += (scale * x[i]) * x[j]   (row-major n x n)
  void (*rank1_update)(double* c, const double* x, std::size_t n, double scale);
  // x[i] += drift[i] * dt + (vol[i] * sqrt_dt) * noise[i]
  void (*euler_step)(double* x, const double* drift, const double* vol, const double* noise,
                     std::size_t n, double dt, double sqrt_dt);
};

const Table& scalar_table();
// nullptr when the variant was not compiled in for this target.
const Table* avx2_table();
const Table* neon_table();

bool isa_available(Isa isa);
const char* isa_name(Isa isa);

// Best ISA supported by the running CPU, unless SPTLAB_KERNELS=scalar|avx2|neon
// narrows the choice. Resolved once per process.
Isa active_isa();
const Table& table(Isa isa);
const Table& active();

double dot(std::span<const double> a, std::span<const double> b);
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);
void rank1_update(std::span<double> c, std::span<const double> x, double scale);
void euler_step(std::span<double> x, std::span<const double> drift, std::span<const double> vol,
                std::span<const double> noise, double dt);

// w' M w for a row-major n x n matrix.
double quad_form(std::span<const double> w, std::span<const double> m);

}  // namespace sptlab::kernels
