#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyerslab/control.hpp"
#include "hyerslab/functional_eq.hpp"
#include "hyerslab/test_function.hpp"

namespace hyerslab {

enum class PerturbationFamily { SineBounded, PowerGrowth, ConstantOffset, Violator };

/// Closed-form perturbation eta added to an affine core; eta points along
/// the first output axis. With s(x) = sum of the coordinates of x:
///
///   SineBounded     eta = A sin(w s(x) + phase)             sup |eta| = A
///   PowerGrowth     eta = A |x|^p cos(w |x| + phase)         |eta| <= A |x|^p
///   ConstantOffset  eta = A for x != 0, eta(0) = 0           sup |eta| = A
///   Violator        eta = A s(x)^2                          unbounded
struct PerturbationSpec {
  PerturbationFamily family = PerturbationFamily::SineBounded;
  double amplitude = 0.0;
  double frequency = 1.0;
  double exponent = 0.5;
  double phase = 0.0;
  /// Echoed into reports; generators are pure functions of the spec.
  std::uint64_t seed = 0;

  void validate() const;
  Json to_json() const;
  static PerturbationSpec from_json(const Json& j);
};

std::string to_string(PerturbationFamily family);

/// A generated function and, when the family admits one, the control
/// function certified to dominate its defect Df.
struct CertifiedFunction {
  TestFunction f;
  std::optional<ControlFunction> control;

  bool certified() const noexcept { return control.has_value(); }
};

/// x -> a x + b with metadata (a, b, budget 0).
TestFunction make_affine(const Matrix& a, const Point& b);

/// f = a x + b + eta. Certificates: Constant(12 sup|eta|) for bounded
/// families, PowerSum(A (3^(p+1) + 9), p) for PowerGrowth, none for Violator.
CertifiedFunction make_perturbed_affine(const Matrix& a, const Point& b, const PerturbationSpec& spec);

/// Certified constant for a family; nullopt for Violator.
std::optional<ControlFunction> certificate_for(const PerturbationSpec& spec);

enum class ViolatorKind { Quadratic, Cubic, AbsoluteValue };

std::string to_string(ViolatorKind kind);
ViolatorKind violator_from_string(const std::string& name);

/// Scalar non-solutions of s(x): s^2, s^3 and |s|.
TestFunction make_violator(ViolatorKind kind, std::size_t dim = 1);

/// Triples with a known nonzero defect for the violator, with the exact
/// value of |Df| there: quadratic and cubic fail at (e1, 0, 0) (6 and 24),
/// absolute value at (e1, -e1, -e1) (4).
struct ViolatorWitness {
  Triple triple;
  double defect;
};
std::vector<ViolatorWitness> known_witnesses(ViolatorKind kind, std::size_t dim = 1);

}  // namespace hyerslab
