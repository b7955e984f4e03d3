#include "hyerslab/control.hpp"

#include <cmath>

namespace hyerslab {

ControlFunction ControlFunction::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("Constant control needs a finite c >= 0");
  ControlFunction f;
  f.kind_ = ControlKind::Constant;
  f.coef_ = c;
  f.alpha_ = 1.0;
  f.name_ = "constant";
  return f;
}

ControlFunction ControlFunction::power_sum(double eps, double p, BaseNorm base) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("PowerSum control needs a finite eps >= 0");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("PowerSum control needs 0 <= p < 1");
  ControlFunction f;
  f.kind_ = ControlKind::PowerSum;
  f.coef_ = eps;
  f.p_ = p;
  f.alpha_ = std::pow(3.0, p);
  f.base_ = base;
  f.name_ = "power_sum";
  return f;
}

ControlFunction ControlFunction::custom(std::string name, Evaluator eval, double alpha) {
  if (!eval) throw DomainError("custom control needs an evaluator");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("custom control needs alpha > 0");
  ControlFunction f;
  f.kind_ = ControlKind::Custom;
  f.alpha_ = alpha;
  f.name_ = std::move(name);
  f.custom_ = std::move(eval);
  return f;
}

double ControlFunction::operator()(const Point& x, const Point& y, const Point& z) const {
  switch (kind_) {
    case ControlKind::Constant:
      return coef_;
    case ControlKind::PowerSum:
      return coef_ * (norm_pow(x, p_, base_) + norm_pow(y, p_, base_) + norm_pow(z, p_, base_));
    case ControlKind::Custom: {
      const double v = custom_(x, y, z);
      if (!(v >= 0.0)) throw DomainError("control '" + name_ + "' returned a negative or NaN value");
      return v;
    }
  }
  return 0.0;
}

double ControlFunction::on_axis(const Point& x) const {
  const Point o = Point::zero(x.dim());
  return (*this)(x, o, o);
}

Json ControlFunction::to_json() const {
  switch (kind_) {
    case ControlKind::Constant:
      return Json{{"kind", "constant"}, {"c", coef_}, {"alpha", alpha_}};
    case ControlKind::PowerSum:
      return Json{{"kind", "power_sum"}, {"eps", coef_}, {"p", p_}, {"alpha", alpha_}, {"base", to_string(base_)}};
    case ControlKind::Custom:
      return Json{{"kind", "custom"}, {"name", name_}, {"alpha", alpha_}};
  }
  return {};
}

ControlFunction ControlFunction::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw DomainError("control: expected an object with a string 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw DomainError(std::string("control: missing numeric '") + key + "'");
    return j[key].get<double>();
  };
  if (kind == "constant") return constant(num("c"));
  if (kind == "power_sum") {
    return power_sum(num("eps"), num("p"), base_norm_from_string(j.value("base", std::string("euclidean"))));
  }
  throw DomainError("control: unknown kind '" + kind + "'");
}

}  // namespace hyerslab
