#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyerslab/parallel.hpp"
#include "hyerslab/point.hpp"
#include "hyerslab/serialize.hpp"
#include "hyerslab/test_function.hpp"

namespace hyerslab {

struct Triple {
  Point x, y, z;
};

Json to_json(const Triple& t);

struct TripleSample {
  std::vector<Triple> triples;
  std::uint64_t seed = 0;

  /// Degenerate triples first, in a fixed order: (0,0,0), then per axis
  /// (e,0,0), (0,e,0), (0,0,e), (e,-e,-e), (e,e,-e), (e,e,e); then for
  /// random x, y the stand-ins (x,0,0), (x,-x,-x), (x,y,-y); the rest is
  /// uniform in [-radius, radius]^d up to `count` triples.
  static TripleSample standard(std::size_t dim, std::size_t count, double radius, std::uint64_t seed);
};

/// Df(x,y,z) = f(3x+y+z) + f(x+3y+z) + f(x+y+3z) + f(x) + f(y) + f(z) - 6 f(x+y+z).
Point eval_D(const TestFunction& f, const Point& x, const Point& y, const Point& z);
inline Point eval_D(const TestFunction& f, const Triple& t) { return eval_D(f, t.x, t.y, t.z); }

/// Default absolute tolerance on residual norms.
inline constexpr double kDefaultResidualTol = 1e-9;

/// Outcome of one named identity check over a probe set.
struct IdentityCheck {
  IdentityCheck() = default;
  explicit IdentityCheck(std::string name) : check_name(std::move(name)) {}

  std::string check_name;
  bool pass = true;
  double max_residual = 0.0;
  /// Arguments of the first failing probe (empty if the check passed).
  std::vector<Point> witness;
  double witness_residual = 0.0;

  void record(double residual, double tol, std::vector<Point> args);
  Json to_json() const;
};

struct SolutionCheck {
  bool pass = true;
  double max_residual = 0.0;
  std::optional<Triple> max_witness;
  /// First triple, in sample order, whose residual exceeds the tolerance.
  std::optional<Triple> first_failure;
  double first_failure_residual = 0.0;
  std::size_t triples_checked = 0;

  Json to_json() const;
};

/// Passes iff ||Df|| <= tol on every sampled triple.
SolutionCheck check_solution(const TestFunction& f, const TripleSample& samples,
                             double tol = kDefaultResidualTol, Exec exec = {});

struct SubstitutionReport {
  IdentityCheck triple_scaling{"g(3x)=3g(x)"};
  IdentityCheck oddness{"g(-x)=-g(x)"};
  IdentityCheck midpoint{"g(x+2y)+g(x-2y)=2g(x)"};
  /// Raw identity 2g(x)+2g(-3x)+2g(-x)=6g(-x) obtained from y=z=-x.
  IdentityCheck raw_negation{"2g(x)+2g(-3x)+2g(-x)=6g(-x)"};

  bool all_pass() const { return triple_scaling.pass && oddness.pass && midpoint.pass; }
  Json to_json() const;
};

/// Checks the consequences of being an exact solution for g = f - f(0):
/// g(3x) = 3g(x), oddness, and g(x+2y) + g(x-2y) = 2g(x) on probe pairs.
SubstitutionReport substitution_suite(const TestFunction& f, const std::vector<Point>& probes,
                                      double tol = kDefaultResidualTol);

struct AffineDecomposition {
  IdentityCheck additivity{"A(u+v)-A(0)=(A(u)-A(0))+(A(v)-A(0))"};
  IdentityCheck scaling{"A(3x)-A(0)=3(A(x)-A(0))"};
  Point constant;

  bool is_affine() const { return additivity.pass && scaling.pass; }
  Json to_json() const;
};

/// Splits A into constant A(0) plus g = A - A(0) and checks g is additive
/// (directly, and through g(u)+g(v) = 2g((u+v)/2)) and 3-homogeneous.
/// Pairs are taken diagonal-first: (p_i, p_i), then (p_i, p_j) with j > i.
AffineDecomposition affine_decompose(const TestFunction& a, const std::vector<Point>& probes,
                                     double tol = kDefaultResidualTol);

}  // namespace hyerslab
