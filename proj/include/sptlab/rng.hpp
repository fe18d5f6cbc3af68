#pragma once
// Counter-based random numbers (Philox4x32-10) with independent per-path
// substreams. Any draw is a pure function of (seed, path, step, index), so
// batches are reproducible regardless of scheduling.

#include <array>
#include <cstdint>
#include <span>

namespace sptlab {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

// Uniform in (0, 1) from 53 random bits.
double uniform_open(std::uint32_t hi, std::uint32_t lo);

class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path);

  // Fills `out` with the standard normals for one step. Each Philox block
  // yields two normals through Box-Muller.
  void fill(std::uint64_t step, std::span<double> out) const;

 private:
  PhiloxKey key_;
  std::uint64_t path_;
};

}  // namespace sptlab
