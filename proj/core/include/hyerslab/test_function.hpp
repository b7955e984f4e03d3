#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hyerslab/point.hpp"

namespace hyerslab {

/// Declared size of the perturbation eta = f - (a x + b).
struct PerturbationBudget {
  /// sup ||eta(x)||; +inf when only a growth profile is known.
  double sup_bound = 0.0;
  /// Optional profile ||eta(x)|| <= coefficient * ||x||^exponent.
  struct Growth {
    double coefficient = 0.0;
    double exponent = 0.0;
  };
  std::optional<Growth> growth;

  /// Budget applicable at x (the tighter of both declarations).
  double at(const Point& x) const;
};

/// Known exact affine part plus the certified perturbation budget.
struct AffineMeta {
  Matrix a;
  Point b;
  PerturbationBudget budget;

  Point affine_at(const Point& x) const { return a * x + b; }
};

/// An evaluatable f: R^d -> R^m. Evaluators must be side-effect free.
class TestFunction {
 public:
  using Evaluator = std::function<Point(const Point&)>;

  TestFunction(std::string name, std::size_t in_dim, std::size_t out_dim, Evaluator eval,
               std::optional<AffineMeta> meta = std::nullopt);

  /// Evaluates f(x). Throws DomainError on dimension mismatch and, in
  /// verification mode, BudgetViolation when the declared budget is exceeded.
  Point operator()(const Point& x) const;

  const std::string& name() const noexcept { return name_; }
  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  const std::optional<AffineMeta>& meta() const noexcept { return meta_; }

  /// Copy whose every call checks the perturbation budget.
  TestFunction verifying() const;
  bool verification_mode() const noexcept { return verify_; }

 private:
  std::string name_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::shared_ptr<const Evaluator> eval_;
  std::optional<AffineMeta> meta_;
  bool verify_ = false;
};

/// c1 f1 + c2 f2 (no metadata carried over).
TestFunction linear_combination(double c1, const TestFunction& f1, double c2, const TestFunction& f2);

}  // namespace hyerslab
