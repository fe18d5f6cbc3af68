#include "sptlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace sptlab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

double uniform_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t path)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path) {}

void NormalStream::fill(std::uint64_t step, std::span<double> out) const {
  const std::uint64_t blocks = (out.size() + 1) / 2;
  const std::uint64_t base = step * blocks;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t idx = base + b;
    const PhiloxBlock r =
        philox4x32_10({static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                       static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                      key_);
    const double u1 = uniform_open(r[0], r[1]);
    const double u2 = uniform_open(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[2 * b] = radius * std::cos(angle);
    if (2 * b + 1 < out.size()) out[2 * b + 1] = radius * std::sin(angle);
  }
}

}  // namespace sptlab
