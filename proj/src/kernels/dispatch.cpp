#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "sptlab/error.hpp"
#include "sptlab/kernels.hpp"

namespace sptlab::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa resolve_isa() {
  const char* env = std::getenv("SPTLAB_KERNELS");
  const std::string_view want = env ? env : "";
  if (want == "scalar") return Isa::Scalar;
  if ((want.empty() || want == "avx2") && isa_available(Isa::Avx2)) return Isa::Avx2;
  if ((want.empty() || want == "neon") && isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

void check_square(std::size_t cells, std::size_t n) {
  require(cells == n * n, ErrorKind::InvalidInput, "kernel: matrix is not n x n");
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return avx2_table() != nullptr && cpu_has_avx2();
    case Isa::Neon:
      return neon_table() != nullptr;
  }
  return false;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

const Table& table(Isa isa) {
  require(isa_available(isa), ErrorKind::InvalidInput,
          std::string("kernel variant not available: ") + isa_name(isa));
  switch (isa) {
    case Isa::Avx2:
      return *avx2_table();
    case Isa::Neon:
      return *neon_table();
    case Isa::Scalar:
      break;
  }
  return scalar_table();
}

const Table& active() {
  static const Table& t = table(active_isa());
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::InvalidInput, "dot: length mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  require(a.size() == b.size() && a.size() == c.size(), ErrorKind::InvalidInput,
          "dot3: length mismatch");
  return active().dot3(a.data(), b.data(), c.data(), a.size());
}

void rank1_update(std::span<double> c, std::span<const double> x, double scale) {
  check_square(c.size(), x.size());
  active().rank1_update(c.data(), x.data(), x.size(), scale);
}

void euler_step(std::span<double> x, std::span<const double> drift, std::span<const double> vol,
                std::span<const double> noise, double dt) {
  const std::size_t n = x.size();
  require(drift.size() == n && vol.size() == n && noise.size() == n, ErrorKind::InvalidInput,
          "euler_step: length mismatch");
  active().euler_step(x.data(), drift.data(), vol.data(), noise.data(), n, dt, std::sqrt(dt));
}

double quad_form(std::span<const double> w, std::span<const double> m) {
  const std::size_t n = w.size();
  check_square(m.size(), n);
  const Table& t = active();
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  // Outer sum follows the same lane order as the inner dot products.
  std::size_t i = 0;
  for (; i < n; ++i) acc[i % 4] += w[i] * t.dot(m.data() + i * n, w.data(), n);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace sptlab::kernels
