#include "hyerslab/rng.hpp"

#include <cmath>

namespace hyerslab {

double Rng::signed_log_uniform(double lo, double hi) {
  const double mag = std::exp(uniform(std::log(lo), std::log(hi)));
  return (next() & 1U) ? -mag : mag;
}

Point Rng::in_cube(std::size_t dim, double radius) {
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = uniform(-radius, radius);
  return p;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hyerslab
