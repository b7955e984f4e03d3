#include "hyerslab/perturb.hpp"

#include <cmath>
#include <limits>

namespace hyerslab {

namespace {

double coord_sum(const Point& x) {
  double s = 0.0;
  for (double v : x.coords()) s += v;
  return s;
}

void require_finite_number(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("perturbation: non-finite ") + what);
}

}  // namespace

std::string to_string(PerturbationFamily family) {
  switch (family) {
    case PerturbationFamily::SineBounded: return "sine_bounded";
    case PerturbationFamily::PowerGrowth: return "power_growth";
    case PerturbationFamily::ConstantOffset: return "constant_offset";
    case PerturbationFamily::Violator: return "violator";
  }
  return "sine_bounded";
}

void PerturbationSpec::validate() const {
  require_finite_number(amplitude, "amplitude");
  require_finite_number(frequency, "frequency");
  require_finite_number(phase, "phase");
  if (amplitude < 0.0) throw DomainError("perturbation: amplitude must be >= 0");
  if (family == PerturbationFamily::PowerGrowth && !(exponent >= 0.0 && exponent < 1.0)) {
    throw DomainError("perturbation: power_growth needs 0 <= exponent < 1");
  }
}

Json PerturbationSpec::to_json() const {
  Json j{{"family", to_string(family)}, {"amplitude", amplitude}, {"seed", seed}};
  if (family == PerturbationFamily::SineBounded || family == PerturbationFamily::PowerGrowth) {
    j["frequency"] = frequency;
    j["phase"] = phase;
  }
  if (family == PerturbationFamily::PowerGrowth) j["exponent"] = exponent;
  return j;
}

PerturbationSpec PerturbationSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw DomainError("perturbation: expected an object with a string 'family'");
  }
  PerturbationSpec s;
  const auto family = j["family"].get<std::string>();
  if (family == "sine_bounded") s.family = PerturbationFamily::SineBounded;
  else if (family == "power_growth") s.family = PerturbationFamily::PowerGrowth;
  else if (family == "constant_offset") s.family = PerturbationFamily::ConstantOffset;
  else if (family == "violator") s.family = PerturbationFamily::Violator;
  else throw DomainError("perturbation: unknown family '" + family + "'");
  auto num = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw DomainError(std::string("perturbation: '") + key + "' must be a number");
    return j[key].get<double>();
  };
  s.amplitude = num("amplitude", 0.0);
  s.frequency = num("frequency", 1.0);
  s.exponent = num("exponent", 0.5);
  s.phase = num("phase", 0.0);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw DomainError("perturbation: 'seed' must be an integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.validate();
  return s;
}

TestFunction make_affine(const Matrix& a, const Point& b) {
  if (!a.is_finite() || !b.is_finite()) throw DomainError("make_affine: non-finite entries");
  if (a.rows() != b.dim()) throw DomainError("make_affine: offset dimension differs from matrix rows");
  AffineMeta meta{a, b, PerturbationBudget{0.0, std::nullopt}};
  return TestFunction("affine", a.cols(), a.rows(), [a, b](const Point& x) { return a * x + b; }, meta);
}

std::optional<ControlFunction> certificate_for(const PerturbationSpec& spec) {
  switch (spec.family) {
    case PerturbationFamily::SineBounded:
    case PerturbationFamily::ConstantOffset:
      // |D eta| <= (1+1+1+1+1+1+6) sup|eta|.
      return ControlFunction::constant(12.0 * spec.amplitude);
    case PerturbationFamily::PowerGrowth:
      return ControlFunction::power_sum(spec.amplitude * (std::pow(3.0, spec.exponent + 1.0) + 9.0), spec.exponent);
    case PerturbationFamily::Violator:
      return std::nullopt;
  }
  return std::nullopt;
}

CertifiedFunction make_perturbed_affine(const Matrix& a, const Point& b, const PerturbationSpec& spec) {
  spec.validate();
  if (!a.is_finite() || !b.is_finite()) throw DomainError("make_perturbed_affine: non-finite affine part");
  if (a.rows() != b.dim()) throw DomainError("make_perturbed_affine: offset dimension differs from matrix rows");

  const double amp = spec.amplitude;
  const double w = spec.frequency;
  const double p = spec.exponent;
  const double phase = spec.phase;
  std::function<double(const Point&)> eta;
  PerturbationBudget budget;
  switch (spec.family) {
    case PerturbationFamily::SineBounded:
      eta = [=](const Point& x) { return amp * std::sin(w * coord_sum(x) + phase); };
      budget.sup_bound = amp;
      break;
    case PerturbationFamily::PowerGrowth:
      eta = [=](const Point& x) {
        const double r = norm(x);
        return r == 0.0 ? 0.0 : amp * std::pow(r, p) * std::cos(w * r + phase);
      };
      budget.sup_bound = std::numeric_limits<double>::infinity();
      budget.growth = PerturbationBudget::Growth{amp, p};
      break;
    case PerturbationFamily::ConstantOffset:
      eta = [=](const Point& x) { return x.is_zero() ? 0.0 : amp; };
      budget.sup_bound = amp;
      break;
    case PerturbationFamily::Violator:
      eta = [=](const Point& x) {
        const double s = coord_sum(x);
        return amp * s * s;
      };
      budget.sup_bound = std::numeric_limits<double>::infinity();
      break;
  }

  AffineMeta meta{a, b, budget};
  const std::string name = "affine+" + to_string(spec.family);
  TestFunction f(name, a.cols(), a.rows(),
                 [a, b, eta](const Point& x) {
                   Point y = a * x + b;
                   y[0] += eta(x);
                   return y;
                 },
                 meta);
  return {std::move(f), certificate_for(spec)};
}

std::string to_string(ViolatorKind kind) {
  switch (kind) {
    case ViolatorKind::Quadratic: return "quadratic";
    case ViolatorKind::Cubic: return "cubic";
    case ViolatorKind::AbsoluteValue: return "absolute_value";
  }
  return "quadratic";
}

ViolatorKind violator_from_string(const std::string& name) {
  if (name == "quadratic") return ViolatorKind::Quadratic;
  if (name == "cubic") return ViolatorKind::Cubic;
  if (name == "absolute_value") return ViolatorKind::AbsoluteValue;
  throw DomainError("unknown violator kind '" + name + "'");
}

TestFunction make_violator(ViolatorKind kind, std::size_t dim) {
  std::function<double(double)> h;
  switch (kind) {
    case ViolatorKind::Quadratic: h = [](double s) { return s * s; }; break;
    case ViolatorKind::Cubic: h = [](double s) { return s * s * s; }; break;
    case ViolatorKind::AbsoluteValue: h = [](double s) { return std::abs(s); }; break;
  }
  return TestFunction("violator:" + to_string(kind), dim, 1,
                      [h](const Point& x) { return Point::scalar(h(coord_sum(x))); });
}

std::vector<ViolatorWitness> known_witnesses(ViolatorKind kind, std::size_t dim) {
  const Point o = Point::zero(dim);
  const Point e = Point::unit(dim, 0);
  switch (kind) {
    case ViolatorKind::Quadratic: return {{{e, o, o}, 6.0}};
    case ViolatorKind::Cubic: return {{{e, o, o}, 24.0}};
    case ViolatorKind::AbsoluteValue: return {{{e, -e, -e}, 4.0}};
  }
  return {};
}

}  // namespace hyerslab
