#include "hyerslab/point.hpp"

#include <algorithm>
#include <cstdio>

namespace hyerslab {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw DomainError("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                      std::to_string(dim));
  }
}

}  // namespace

Point::Point(std::size_t dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point::Point(std::span<const double> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::unit(std::size_t dim, std::size_t axis) {
  Point p(dim);
  if (axis >= dim) throw DomainError("unit axis out of range");
  p[axis] = 1.0;
  return p;
}

bool Point::is_finite() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](double v) { return std::isfinite(v); });
}

bool Point::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](double v) { return v == 0.0; });
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o, "point addition");
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o, "point subtraction");
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator-(Point a) { return a *= -1.0; }
Point operator*(double s, Point a) { return a *= s; }
Point operator*(Point a, double s) { return a *= s; }
Point operator/(Point a, double s) {
  for (std::size_t i = 0; i < a.dim(); ++i) a[i] /= s;
  return a;
}

void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()) + ")");
  }
}

void require_finite(const Point& x, const char* what) {
  if (!x.is_finite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

double norm(const Point& x, BaseNorm base) noexcept {
  double acc = 0.0;
  switch (base) {
    case BaseNorm::Euclidean:
      if (x.dim() == 1) return std::abs(x[0]);
      for (double v : x.coords()) acc = std::hypot(acc, v);
      return acc;
    case BaseNorm::Manhattan:
      for (double v : x.coords()) acc += std::abs(v);
      return acc;
    case BaseNorm::Max:
      for (double v : x.coords()) acc = std::max(acc, std::abs(v));
      return acc;
  }
  return acc;
}

double norm_pow(const Point& x, double p, BaseNorm base) {
  const double n = norm(x, base);
  return n == 0.0 ? 0.0 : std::pow(n, p);
}

std::string to_string(BaseNorm base) {
  switch (base) {
    case BaseNorm::Euclidean: return "euclidean";
    case BaseNorm::Manhattan: return "manhattan";
    case BaseNorm::Max: return "max";
  }
  return "euclidean";
}

BaseNorm base_norm_from_string(const std::string& name) {
  if (name == "euclidean") return BaseNorm::Euclidean;
  if (name == "manhattan") return BaseNorm::Manhattan;
  if (name == "max") return BaseNorm::Max;
  throw DomainError("unknown base norm '" + name + "'");
}

std::string to_string(const Point& x) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < x.dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", x[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  check_dim(rows);
  check_dim(cols);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  check_dim(rows_);
  check_dim(cols_);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DomainError("ragged matrix rows");
    std::size_t c = 0;
    for (double v : row) (*this)(r, c++) = v;
    ++r;
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::is_finite() const noexcept {
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (!std::isfinite((*this)(r, c))) return false;
    }
  }
  return true;
}

Point operator*(const Matrix& a, const Point& x) {
  if (a.cols() != x.dim()) throw DomainError("matrix-vector product: dimension mismatch");
  Point y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

}  // namespace hyerslab
