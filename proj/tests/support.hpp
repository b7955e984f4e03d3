#pragma once

// Independent reference formulas and seeded generators for the tests.
// Nothing here calls into the library's numerical code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hyerslab/point.hpp"

namespace oracle {

inline long double euclid(const std::vector<long double>& v) {
  long double s = 0;
  for (auto c : v) s += c * c;
  return std::sqrt(s);
}

inline double crisp(double p, double r, double t) { return t > 0 ? t / (t + p * r) : 0.0; }

inline double quadratic(double r, double t) { return t > r ? (t * t - r * r) / (t * t + r * r) : 0.0; }

/// Df for a scalar function of one variable, in long double.
inline long double defect(const std::function<long double(long double)>& f, long double x, long double y,
                          long double z) {
  return f(3 * x + y + z) + f(x + 3 * y + z) + f(x + y + 3 * z) + f(x) + f(y) + f(z) - 6 * f(x + y + z);
}

/// (1 - (a/3)^n) / (3 - a), the closed form of sum_{j<n} a^j / 3^(j+1).
inline long double stage_closed(long double a, int n) { return (1 - std::pow(a / 3, n)) / (3 - a); }

/// Brute-force sum_{n<terms} 3^-n phi(3^n), phi given along the axis.
inline long double series(const std::function<long double(long double)>& phi_axis, long double x, int terms) {
  long double s = 0, scale = 1;
  for (int n = 0; n < terms; ++n, scale *= 3) s += phi_axis(scale * x) / scale;
  return s;
}

}  // namespace oracle

// Hand-rolled generator for property tests: each case is reproducible from
// (seed, case index), which tests report through CAPTURE.
struct Gen {
  explicit Gen(std::uint64_t seed) : eng(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  std::size_t dim() { return static_cast<std::size_t>(integer(1, 3)); }

  // Magnitudes spread over several decades, either sign.
  double wide(double lo_exp, double hi_exp) {
    const double v = std::pow(10.0, real(lo_exp, hi_exp));
    return integer(0, 1) ? v : -v;
  }

  hyerslab::Point point(std::size_t d, double r) {
    hyerslab::Point p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = real(-r, r);
    return p;
  }

  hyerslab::Matrix matrix(std::size_t rows, std::size_t cols, double r) {
    hyerslab::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = real(-r, r);
    return m;
  }

  std::mt19937_64 eng;
};

template <class Fn>
void for_all(std::uint64_t seed, int cases, Fn&& fn) {
  for (int i = 0; i < cases; ++i) {
    Gen g(seed * 1000003ULL + static_cast<std::uint64_t>(i));
    fn(g, i);
  }
}
