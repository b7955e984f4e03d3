#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "hyerslab/errors.hpp"

namespace hyerslab {

/// Largest vector-space dimension handled by the toolkit.
inline constexpr std::size_t kMaxDim = 3;

/// A vector in R^d, 1 <= d <= kMaxDim, stored inline.
class Point {
 public:
  Point() = default;

  /// Zero vector of dimension `dim`.
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  static Point zero(std::size_t dim) { return Point(dim); }
  static Point unit(std::size_t dim, std::size_t axis);
  static Point scalar(double v) { return Point{v}; }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

  bool is_finite() const noexcept;
  bool is_zero() const noexcept;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s) noexcept;

  friend bool operator==(const Point& a, const Point& b) noexcept;

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator-(Point a);
Point operator*(double s, Point a);
Point operator*(Point a, double s);
Point operator/(Point a, double s);

/// Throws DomainError unless both points share a dimension.
void require_same_dim(const Point& a, const Point& b, const char* what);
void require_finite(const Point& x, const char* what);

enum class BaseNorm { Euclidean, Manhattan, Max };

double norm(const Point& x, BaseNorm base = BaseNorm::Euclidean) noexcept;

/// ||x||^p with the convention 0^p = 0 for every p >= 0.
double norm_pow(const Point& x, double p, BaseNorm base = BaseNorm::Euclidean);

std::string to_string(BaseNorm base);
BaseNorm base_norm_from_string(const std::string& name);
std::string to_string(const Point& x);

/// Dense m x d matrix, m, d <= kMaxDim.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix scalar(double a) { return Matrix{{a}}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * kMaxDim + c]; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * kMaxDim + c]; }

  bool is_finite() const noexcept;

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

Point operator*(const Matrix& a, const Point& x);

}  // namespace hyerslab
