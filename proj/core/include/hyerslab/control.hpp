#pragma once

#include <functional>
#include <string>

#include "hyerslab/point.hpp"
#include "hyerslab/serialize.hpp"

namespace hyerslab {

enum class ControlKind { Constant, PowerSum, Custom };

/// Control function phi: X^3 -> [0, inf) bounding the defect Df, together
/// with its scaling factor alpha, phi(3x, 0, 0) = alpha * phi(x, 0, 0).
///
///   Constant(c):     phi = c,                              alpha = 1
///   PowerSum(e, p):  phi = e (|x|^p + |y|^p + |z|^p),      alpha = 3^p, 0 <= p < 1
///   Custom:          user evaluator with a declared alpha
class ControlFunction {
 public:
  using Evaluator = std::function<double(const Point&, const Point&, const Point&)>;

  static ControlFunction constant(double c);
  static ControlFunction power_sum(double eps, double p, BaseNorm base = BaseNorm::Euclidean);
  /// alpha must be positive; whether alpha < 3 is checked by the operations
  /// that need it.
  static ControlFunction custom(std::string name, Evaluator eval, double alpha);

  /// phi(x, y, z); throws DomainError if a custom evaluator returns a negative value.
  double operator()(const Point& x, const Point& y, const Point& z) const;

  /// phi(x, 0, 0).
  double on_axis(const Point& x) const;

  ControlKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double coefficient() const noexcept { return coef_; }
  double exponent() const noexcept { return p_; }
  BaseNorm base() const noexcept { return base_; }
  const std::string& name() const noexcept { return name_; }

  Json to_json() const;
  static ControlFunction from_json(const Json& j);

 private:
  ControlKind kind_ = ControlKind::Constant;
  double coef_ = 0.0;
  double p_ = 0.0;
  double alpha_ = 1.0;
  BaseNorm base_ = BaseNorm::Euclidean;
  std::string name_;
  Evaluator custom_;
};

}  // namespace hyerslab
