#pragma once

#include <cstdint>
#include <random>

#include "hyerslab/point.hpp"

namespace hyerslab {

// Seeded generator whose variates are bit-identical on every platform:
// std::mt19937_64 is fully specified, the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

  /// Log-uniform magnitude in [lo, hi] with a random sign.
  double signed_log_uniform(double lo, double hi);

  /// Point with coordinates uniform in [-radius, radius].
  Point in_cube(std::size_t dim, double radius);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a stream index (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace hyerslab
