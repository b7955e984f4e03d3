#include "hyerslab/hyers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyerslab {

namespace {

constexpr double kMembershipTol = 1e-12;
constexpr int kDecaySteps = 30;

void require_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 3.0)) {
    throw DomainError(std::string(what) + ": alpha must lie in (0, 3), got " + std::to_string(alpha));
  }
}

void require_converged(const ExtractionResult& ext, const char* what) {
  if (!ext.converged) throw ConvergenceError(std::string(what) + ": extraction did not converge");
}

Json optional_point(const std::optional<Point>& p) { return p ? to_json(*p) : Json(nullptr); }
Json optional_triple(const std::optional<Triple>& t) { return t ? to_json(*t) : Json(nullptr); }

// Absolute tail tolerance relative to the leading term of the series.
double relative_tail(double leading) { return std::max(1e-13 * leading, 1e-300); }

double phi_tilde_on_axis(const ControlFunction& phi, const Point& x) {
  const Point o = Point::zero(x.dim());
  return phi_tilde(phi, o, o, x, relative_tail(phi(o, o, x))).value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Iteration

void StoppingRule::validate() const {
  if (n_max < 1) throw DomainError("stopping rule: n_max must be >= 1");
  if (!(successive_tol > 0.0)) throw DomainError("stopping rule: successive_tol must be positive");
  if (!(argument_cap > 0.0)) throw DomainError("stopping rule: argument_cap must be positive");
}

Json StoppingRule::to_json() const {
  return Json{{"n_max", n_max}, {"successive_tol", successive_tol}, {"argument_cap", argument_cap}};
}

StoppingRule StoppingRule::from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("stopping rule: expected an object");
  StoppingRule r;
  if (j.contains("n_max")) {
    if (!j["n_max"].is_number_integer()) throw DomainError("stopping rule: 'n_max' must be an integer");
    r.n_max = j["n_max"].get<int>();
  }
  for (auto [key, slot] : {std::pair{"successive_tol", &r.successive_tol}, std::pair{"argument_cap", &r.argument_cap}}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_number()) throw DomainError(std::string("stopping rule: '") + key + "' must be a number");
    *slot = j[key].get<double>();
  }
  r.validate();
  return r;
}

Point hyers_iterate(const TestFunction& f, const Point& x, int n, double argument_cap) {
  if (n < 0) throw DomainError("hyers_iterate: n must be >= 0");
  double scale = 1.0;
  int last_safe = -1;
  for (int k = 0; k <= n; ++k) {
    if (norm(scale * x) > argument_cap) {
      throw IterationOverflow("hyers_iterate: |3^" + std::to_string(k) + " x| exceeds the argument cap", last_safe);
    }
    last_safe = k;
    if (k < n) scale *= 3.0;
  }
  return f(scale * x) / scale;
}

Sequence hyers_sequence(const TestFunction& f, const Point& x, double argument_cap) {
  const Point f0 = f(Point::zero(f.in_dim()));
  return [f, x, f0, argument_cap](int n) { return hyers_iterate(f, x, n, argument_cap) - f0 / std::pow(3.0, n); };
}

const ProbeValue* ExtractionResult::find(const Point& x) const {
  for (const auto& p : probes) {
    if (p.x == x) return &p;
  }
  return nullptr;
}

Json ExtractionResult::to_json() const {
  Json pts = Json::array();
  for (const auto& p : probes) {
    pts.push_back(Json{{"x", hyerslab::to_json(p.x)},
                       {"A", hyerslab::to_json(p.value)},
                       {"depth", p.depth},
                       {"converged", p.converged},
                       {"overflow", p.overflow}});
  }
  return Json{{"probes", pts},
              {"f_at_zero", f_at_zero.dim() ? hyerslab::to_json(f_at_zero) : Json(nullptr)},
              {"depth_used", depth_used},
              {"alpha", alpha},
              {"stage_bound", stage_bound},
              {"converged", converged},
              {"overflow", overflow}};
}

ExtractionResult extract_affine(const TestFunction& f, const std::vector<Point>& probes, const StoppingRule& rule,
                                double alpha, Exec exec) {
  if (probes.empty()) throw DomainError("extract_affine: probes must be nonempty");
  rule.validate();
  require_alpha(alpha, "extract_affine");

  ExtractionResult out;
  out.alpha = alpha;
  out.f_at_zero = f(Point::zero(f.in_dim()));
  out.probes.resize(probes.size());
  const Point f0 = out.f_at_zero;

  parallel_for(probes.size(), exec, [&](std::size_t i) {
    ProbeValue pv;
    pv.x = probes[i];
    Point prev = f(pv.x) - f0;
    pv.value = prev;
    if (norm(pv.x) > rule.argument_cap) pv.overflow = true;
    // Successive differences are tracked through the envelope
    // max(diff_n, env_{n-1} / 3): an oscillating perturbation can make a
    // few consecutive differences tiny by coincidence, while the envelope
    // keeps the 3^-n scale of the earlier ones.
    double envelope = 0.0;
    double scale = 1.0;
    for (int n = 1; n <= rule.n_max && !pv.overflow; ++n) {
      scale *= 3.0;
      const Point arg = scale * pv.x;
      if (norm(arg) > rule.argument_cap) {
        pv.overflow = true;
        break;
      }
      const Point cur = (f(arg) - f0) / scale;
      envelope = std::max(norm(cur - prev), envelope / 3.0);
      prev = cur;
      pv.value = cur;
      pv.depth = n;
      if (envelope <= rule.successive_tol) {
        pv.converged = true;
        break;
      }
    }
    out.probes[i] = std::move(pv);
  });

  out.converged = true;
  for (const auto& p : out.probes) {
    out.depth_used = std::max(out.depth_used, p.depth);
    out.converged = out.converged && p.converged;
    out.overflow = out.overflow || p.overflow;
  }
  out.stage_bound = stage_error_bound(alpha, out.depth_used);
  return out;
}

TestFunction approximant(const TestFunction& f, const StoppingRule& rule) {
  std::vector<Point> basis;
  for (std::size_t i = 0; i < f.in_dim(); ++i) basis.push_back(Point::unit(f.in_dim(), i));
  const ExtractionResult ext = extract_affine(f, basis, rule);
  require_converged(ext, "approximant");
  Matrix l(f.out_dim(), f.in_dim());
  for (std::size_t c = 0; c < f.in_dim(); ++c) {
    for (std::size_t r = 0; r < f.out_dim(); ++r) l(r, c) = ext.probes[c].value[r];
  }
  const Point zero = Point::zero(f.out_dim());
  return TestFunction("A[" + f.name() + "]", f.in_dim(), f.out_dim(), [l](const Point& x) { return l * x; },
                      AffineMeta{l, zero, PerturbationBudget{0.0, std::nullopt}});
}

double stage_error_bound(double alpha, int n) {
  require_alpha(alpha, "stage_error_bound");
  if (n < 0) throw DomainError("stage_error_bound: n must be >= 0");
  double sum = 0.0;
  double term = 1.0 / 3.0;
  for (int j = 0; j < n; ++j) {
    sum += term;
    term *= alpha / 3.0;
  }
  return sum;
}

double stage_error_bound_limit(double alpha) {
  require_alpha(alpha, "stage_error_bound_limit");
  return 1.0 / (3.0 - alpha);
}

// ---------------------------------------------------------------------------
// phi~

PhiTilde phi_tilde_partial(const ControlFunction& phi, const Point& x, const Point& y, const Point& z, int terms) {
  if (phi.alpha() >= 3.0) throw DivergentSeries("phi~: alpha >= 3, the series does not converge");
  if (terms < 1) throw DomainError("phi~: need at least one term");
  const double ratio = phi.alpha() / 3.0;
  PhiTilde out;
  out.certified = true;
  double scale = 1.0;
  double last = 0.0;
  for (int n = 0; n < terms; ++n) {
    const Point sx = scale * x, sy = scale * y, sz = scale * z;
    if (!sx.is_finite() || !sy.is_finite() || !sz.is_finite()) {
      out.certified = false;
      break;
    }
    last = phi(sx, sy, sz) / scale;
    out.value += last;
    out.terms = n + 1;
    scale *= 3.0;
  }
  out.remainder_bound = out.certified ? last * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  return out;
}

PhiTilde phi_tilde(const ControlFunction& phi, const Point& x, const Point& y, const Point& z, double tail_tol) {
  if (phi.alpha() >= 3.0) throw DivergentSeries("phi~: alpha >= 3, the series does not converge");
  if (!(tail_tol > 0.0)) throw DomainError("phi~: tail_tol must be positive");
  constexpr int kMaxTerms = 2000;
  const double ratio = phi.alpha() / 3.0;
  PhiTilde out;
  double scale = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const Point sx = scale * x, sy = scale * y, sz = scale * z;
    if (!sx.is_finite() || !sy.is_finite() || !sz.is_finite()) break;
    const double term = phi(sx, sy, sz) / scale;
    out.value += term;
    out.terms = n + 1;
    out.remainder_bound = term * ratio / (1.0 - ratio);
    if (out.remainder_bound <= tail_tol) {
      out.certified = true;
      return out;
    }
    scale *= 3.0;
  }
  return out;
}

double phi_tilde_on_axis_closed_form(const ControlFunction& phi, const Point& x) {
  switch (phi.kind()) {
    case ControlKind::Constant:
      return 1.5 * phi.coefficient();
    case ControlKind::PowerSum:
      return phi.coefficient() * norm_pow(x, phi.exponent(), phi.base()) / (1.0 - std::pow(3.0, phi.exponent() - 1.0));
    case ControlKind::Custom:
      break;
  }
  throw DomainError("phi~ closed form: not available for custom controls");
}

std::vector<double> geometric_t_grid(double t0, int decades, int per_decade) {
  if (!(t0 > 0.0) || decades < 1 || per_decade < 1) throw DomainError("geometric_t_grid: invalid parameters");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(decades * per_decade));
  for (int k = 0; k < decades * per_decade; ++k) {
    grid.push_back(t0 * std::pow(10.0, static_cast<double>(k) / per_decade));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Non-uniform verifiers

Json HypothesisReport::to_json() const {
  return Json{{"pass", pass},
              {"worst_margin", worst_margin},
              {"worst_triple", optional_triple(worst_triple)},
              {"worst_t", worst_t},
              {"samples", samples},
              {"max_defect_ratio", max_defect_ratio},
              {"alpha_in_range", alpha_in_range},
              {"scaling_pass", scaling_pass},
              {"scaling_max_violation", scaling_max_violation},
              {"decay_pass", decay_pass}};
}

HypothesisReport verify_hypothesis_nonuniform(const TestFunction& f, const ControlFunction& phi,
                                              const FuzzyNormSpec& n, const FuzzyNormSpec& n_prime,
                                              const TripleSample& triples, const std::vector<double>& t_grid,
                                              Exec exec) {
  struct PerTriple {
    double margin = 1.0;
    double t = 0.0;
    double ratio = 0.0;
    double scaling_violation = 0.0;
    bool decays = true;
  };
  const double alpha = phi.alpha();
  const bool exact_scaling = phi.kind() != ControlKind::Custom;
  double t_min = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (t > 0.0) t_min = std::min(t_min, t);
  }

  std::vector<PerTriple> rows(triples.triples.size());
  parallel_for(rows.size(), exec, [&](std::size_t i) {
    const Triple& tr = triples.triples[i];
    PerTriple row;
    const Point d = eval_D(f, tr);
    const double phi_v = phi(tr.x, tr.y, tr.z);
    const Point phi_pt = Point::scalar(phi_v);
    for (double t : t_grid) {
      const double m = eval_norm(n, d, t).value() - eval_norm(n_prime, phi_pt, t).value();
      if (m < row.margin) {
        row.margin = m;
        row.t = t;
      }
    }
    const double dn = norm(d, n.base());
    row.ratio = phi_v > 0.0 ? dn / phi_v : (dn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

    // Scaling of phi along the first argument.
    const double on3 = phi.on_axis(3.0 * tr.x);
    const double scaled = alpha * phi.on_axis(tr.x);
    if (exact_scaling) {
      row.scaling_violation = std::abs(on3 - scaled) / std::max(1.0, scaled);
    }
    for (double t : t_grid) {
      const double gap = eval_norm(n_prime, Point::scalar(scaled), t).value() -
                         eval_norm(n_prime, Point::scalar(on3), t).value();
      row.scaling_violation = std::max(row.scaling_violation, gap);
    }

    // Decay of N'(phi(3^n x, 3^n y, 3^n z), 3^n t) towards 1 at the
    // smallest grid t: the gap to 1 must not grow with n. For shipped
    // controls phi(3^n .) = alpha^n phi exactly, so the limit follows from
    // alpha < 3; custom controls must also shrink the gap by 1e3 at n = 30.
    if (std::isfinite(t_min)) {
      double s = 1.0;
      double first_gap = 0.0;
      double gap = 0.0;
      for (int k = 0; k <= kDecaySteps && row.decays; ++k) {
        const double v = phi(s * tr.x, s * tr.y, s * tr.z);
        const double next = 1.0 - eval_norm(n_prime, Point::scalar(v), s * t_min).value();
        if (k == 0) first_gap = next;
        else if (next > gap + kMembershipTol) row.decays = false;
        gap = next;
        s *= 3.0;
      }
      if (!exact_scaling && gap > 1e-3 * first_gap + kMembershipTol) row.decays = false;
    }
    rows[i] = row;
  });

  HypothesisReport rep;
  rep.samples = rows.size() * t_grid.size();
  rep.alpha_in_range = alpha > 0.0 && alpha < 3.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.margin < rep.worst_margin) {
      rep.worst_margin = r.margin;
      rep.worst_triple = triples.triples[i];
      rep.worst_t = r.t;
    }
    rep.max_defect_ratio = std::max(rep.max_defect_ratio, r.ratio);
    rep.scaling_max_violation = std::max(rep.scaling_max_violation, r.scaling_violation);
    rep.decay_pass = rep.decay_pass && r.decays;
  }
  rep.scaling_pass = rep.scaling_max_violation <= kMembershipTol;
  rep.pass = rep.alpha_in_range && rep.worst_margin >= -kMembershipTol && rep.scaling_pass && rep.decay_pass;
  return rep;
}

Json BoundReport::to_json() const {
  Json rows = Json::array();
  for (const auto& p : probes) {
    rows.push_back(Json{{"x", hyerslab::to_json(p.x)},
                        {"residual", p.residual},
                        {"bound", p.bound},
                        {"min_margin", p.min_margin}});
  }
  return Json{{"pass", pass},
              {"worst_margin", worst_margin},
              {"worst_probe", optional_point(worst_probe)},
              {"worst_t", worst_t},
              {"sup_residual", sup_residual},
              {"sup_bound", sup_bound},
              {"crisp_reduction", crisp_reduction},
              {"crisp_pass", crisp_pass},
              {"probes", rows}};
}

BoundReport verify_bound_nonuniform(const TestFunction& f, const ExtractionResult& ext, const ControlFunction& phi,
                                    const FuzzyNormSpec& n, const FuzzyNormSpec& n_prime, double alpha,
                                    const std::vector<Point>& probes, const std::vector<double>& t_grid) {
  require_converged(ext, "verify_bound_nonuniform");
  require_alpha(alpha, "verify_bound_nonuniform");
  const double c = 3.0 - alpha;

  std::vector<Point> xs = probes;
  if (xs.empty()) {
    for (const auto& p : ext.probes) xs.push_back(p.x);
  }

  BoundReport rep;
  rep.crisp_reduction = n.kind() == FuzzyNormKind::CrispInduced && n_prime.kind() == FuzzyNormKind::CrispInduced &&
                        n.p() == n_prime.p() && n.base() == n_prime.base();
  rep.crisp_pass = true;
  for (const auto& x : xs) {
    const ProbeValue* pv = ext.find(x);
    if (!pv) throw DomainError("verify_bound_nonuniform: probe " + to_string(x) + " was not extracted");
    const Point r = f(x) - pv->value - ext.f_at_zero;
    const double phi_x = phi.on_axis(x);
    ProbeBound row{x, norm(r, n.base()), phi_x / c, 1.0};
    for (double t : t_grid) {
      const double m = eval_norm(n, r, t).value() - eval_norm(n_prime, Point::scalar(phi_x), c * t).value();
      if (m < row.min_margin) {
        row.min_margin = m;
        if (m < rep.worst_margin) {
          rep.worst_margin = m;
          rep.worst_probe = x;
          rep.worst_t = t;
        }
      }
    }
    rep.sup_residual = std::max(rep.sup_residual, row.residual);
    rep.sup_bound = std::max(rep.sup_bound, row.bound);
    rep.crisp_pass = rep.crisp_pass && row.residual <= row.bound * (1.0 + 1e-12) + 1e-15;
    rep.probes.push_back(std::move(row));
  }
  rep.pass = rep.worst_margin >= -kMembershipTol;
  return rep;
}

// ---------------------------------------------------------------------------
// Uniform verifiers

Json UniformBoundReport::to_json() const {
  return Json{{"pass", pass},
              {"hypothesis_pass", hypothesis_pass},
              {"hypothesis_min_membership", hypothesis_min_membership},
              {"hypothesis_witness", optional_triple(hypothesis_witness)},
              {"hypothesis_vacuous", hypothesis_vacuous},
              {"conclusion_pass", conclusion_pass},
              {"conclusion_min_membership", conclusion_min_membership},
              {"conclusion_witness", optional_point(conclusion_witness)},
              {"conclusion_vacuous", conclusion_vacuous}};
}

UniformBoundReport verify_bound_uniform(const TestFunction& f, const ExtractionResult& ext,
                                        const ControlFunction& phi, const FuzzyNormSpec& n,
                                        const TripleSample& triples, double delta, double level,
                                        const std::vector<Point>& probes) {
  require_converged(ext, "verify_bound_uniform");
  if (!(delta > 0.0)) throw DomainError("verify_bound_uniform: delta must be positive");
  if (!(level > 0.0 && level <= 1.0)) throw DomainError("verify_bound_uniform: level must lie in (0, 1]");

  UniformBoundReport rep;
  rep.hypothesis_pass = true;
  for (const auto& tr : triples.triples) {
    const Point d = eval_D(f, tr);
    const double phi_v = phi(tr.x, tr.y, tr.z);
    if (phi_v == 0.0 && d.is_zero()) {
      ++rep.hypothesis_vacuous;
      continue;
    }
    const double m = eval_norm(n, d, delta * phi_v).value();
    rep.hypothesis_min_membership = std::min(rep.hypothesis_min_membership, m);
    if (!(m > level) && rep.hypothesis_pass) {
      rep.hypothesis_pass = false;
      rep.hypothesis_witness = tr;
    }
  }

  std::vector<Point> xs = probes;
  if (xs.empty()) {
    for (const auto& p : ext.probes) xs.push_back(p.x);
  }
  rep.conclusion_pass = true;
  for (const auto& x : xs) {
    const ProbeValue* pv = ext.find(x);
    if (!pv) throw DomainError("verify_bound_uniform: probe " + to_string(x) + " was not extracted");
    const Point r = f(x) - pv->value - ext.f_at_zero;
    const double radius = delta / 3.0 * phi_tilde_on_axis(phi, x);
    if (radius == 0.0 && r.is_zero()) {
      ++rep.conclusion_vacuous;
      continue;
    }
    const double m = eval_norm(n, r, radius).value();
    rep.conclusion_min_membership = std::min(rep.conclusion_min_membership, m);
    if (!(m > level) && rep.conclusion_pass) {
      rep.conclusion_pass = false;
      rep.conclusion_witness = x;
    }
  }
  rep.pass = rep.hypothesis_pass && rep.conclusion_pass;
  return rep;
}

std::vector<double> default_eps_schedule(std::size_t size) {
  if (size == 0) return {};
  if (size == 1) return {1e-3};
  std::vector<double> eps;
  eps.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    eps.push_back(0.5 * std::pow(2e-3, static_cast<double>(k) / static_cast<double>(size - 1)));
  }
  return eps;
}

Json UniformLimitReport::to_json() const {
  Json found = Json::array();
  for (const auto& fnd : findings) {
    found.push_back(Json{{"kind", fnd.kind}, {"x", hyerslab::to_json(fnd.x)}, {"detail", fnd.detail}});
  }
  Json curve = Json::array();
  for (const auto& row : membership_curve) {
    curve.push_back(Json{{"t", row.t}, {"membership", row.membership}, {"threshold", row.threshold}});
  }
  Json rows = Json::array();
  for (const auto& p : probes) {
    rows.push_back(Json{{"x", hyerslab::to_json(p.x)}, {"residual", p.residual}, {"phi_tilde", p.phi_tilde}});
  }
  return Json{{"pass", pass},
              {"sup_ratio", sup_ratio},
              {"worst_probe", optional_point(worst_probe)},
              {"excluded", excluded},
              {"thresholds", thresholds},
              {"t_schedule", t_schedule},
              {"eps_schedule", eps_schedule},
              {"findings", found},
              {"membership_curve", curve},
              {"probes", rows}};
}

UniformLimitReport verify_uniform_limit(const TestFunction& f, const ExtractionResult& ext,
                                        const ControlFunction& phi, const FuzzyNormSpec& n,
                                        const std::vector<double>& t_schedule,
                                        const std::vector<double>& eps_schedule) {
  require_converged(ext, "verify_uniform_limit");
  if (t_schedule.empty() || t_schedule.size() != eps_schedule.size()) {
    throw DomainError("verify_uniform_limit: t and eps schedules must be nonempty and of equal length");
  }
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    if (!(t_schedule[k] > 0.0) || (k && !(t_schedule[k] > t_schedule[k - 1]))) {
      throw DomainError("verify_uniform_limit: t schedule must be positive and strictly increasing");
    }
    if (!(eps_schedule[k] > 0.0 && eps_schedule[k] < 1.0)) {
      throw DomainError("verify_uniform_limit: eps values must lie in (0, 1)");
    }
  }

  UniformLimitReport rep;
  rep.t_schedule = t_schedule;
  rep.eps_schedule = eps_schedule;
  rep.thresholds.assign(t_schedule.size(), 0.0);
  std::vector<Point> residuals;
  std::vector<double> tildes;
  std::optional<std::size_t> worst;
  for (const auto& pv : ext.probes) {
    const Point r = f(pv.x) - pv.value - ext.f_at_zero;
    const double rn = norm(r, n.base());
    const double tilde = phi_tilde_on_axis(phi, pv.x);
    rep.probes.push_back({pv.x, rn, tilde});
    if (tilde == 0.0) {
      if (rn == 0.0) {
        ++rep.excluded;
      } else {
        rep.findings.push_back({"uniformity-violation", pv.x,
                                "phi~(0,0,x) = 0 but the residual is " + std::to_string(rn)});
      }
      continue;
    }
    const double ratio = rn / tilde;
    if (!worst || ratio > rep.sup_ratio) {
      rep.sup_ratio = ratio;
      worst = residuals.size();
      rep.worst_probe = pv.x;
    }
    for (std::size_t k = 0; k < t_schedule.size(); ++k) {
      rep.thresholds[k] = std::max(rep.thresholds[k], level_radius(n, r, 1.0 - eps_schedule[k]) / tilde);
    }
    residuals.push_back(r);
    tildes.push_back(tilde);
  }

  // Past the threshold every probe must already sit at or above 1 - eps.
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    if (!(t_schedule[k] > rep.thresholds[k])) continue;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      const double m = eval_norm(n, residuals[i], t_schedule[k] * tildes[i]).value();
      if (m < 1.0 - eps_schedule[k] - kMembershipTol) {
        rep.findings.push_back({"membership-below-level", rep.probes[i].x,
                                "membership " + std::to_string(m) + " at t = " + std::to_string(t_schedule[k])});
      }
    }
  }
  if (worst && !(t_schedule.back() > rep.thresholds.back())) {
    rep.findings.push_back({"uniformity-violation", *rep.worst_probe,
                            "membership >= 1 - " + std::to_string(eps_schedule.back()) + " needs t > " +
                                std::to_string(rep.thresholds.back()) + ", beyond the schedule end " +
                                std::to_string(t_schedule.back())});
  }
  if (worst) {
    for (std::size_t k = 0; k < t_schedule.size(); ++k) {
      const double m = eval_norm(n, residuals[*worst], t_schedule[k] * tildes[*worst]).value();
      rep.membership_curve.push_back({t_schedule[k], m, 1.0 - eps_schedule[k]});
    }
  }
  rep.pass = rep.findings.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Uniqueness and the power-control corollary

Json UniquenessReport::to_json() const {
  return Json{{"max_discrepancy", max_discrepancy},
              {"worst_probe", optional_point(worst_probe)},
              {"discrepancies", discrepancies}};
}

UniquenessReport uniqueness_probe(const TestFunction& f1, const TestFunction& f2, const std::vector<Point>& probes,
                                  const StoppingRule& rule, Exec exec) {
  const ExtractionResult e1 = extract_affine(f1, probes, rule, 1.0, exec);
  const ExtractionResult e2 = extract_affine(f2, probes, rule, 1.0, exec);
  require_converged(e1, "uniqueness_probe (first function)");
  require_converged(e2, "uniqueness_probe (second function)");
  UniquenessReport rep;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double d = norm(e1.probes[i].value - e2.probes[i].value);
    rep.discrepancies.push_back(d);
    if (!rep.worst_probe || d > rep.max_discrepancy) {
      rep.max_discrepancy = d;
      rep.worst_probe = probes[i];
    }
  }
  return rep;
}

Json Corollary53Report::to_json() const {
  return Json{{"pass", pass},
              {"eps", eps},
              {"p", p},
              {"factor", factor},
              {"certificate_ok", certificate_ok ? Json(*certificate_ok) : Json(nullptr)},
              {"closed_form_max_rel_diff", closed_form_max_rel_diff},
              {"hypothesis", hypothesis.to_json()},
              {"extraction",
               Json{{"converged", extraction.converged},
                    {"depth_used", extraction.depth_used},
                    {"stage_bound", extraction.stage_bound},
                    {"overflow", extraction.overflow}}},
              {"uniform_limit", limit.to_json()}};
}

Corollary53Report corollary53_suite(double eps, double p, const TestFunction& f, const std::vector<Point>& probes,
                                    const std::vector<double>& t_schedule, const Corollary53Options& opts) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("corollary53_suite: requires 0 <= p < 1");
  const ControlFunction phi = ControlFunction::power_sum(eps, p);

  Corollary53Report rep;
  rep.eps = eps;
  rep.p = p;
  const double k = std::pow(3.0, 1.0 - p);
  rep.factor = k / (k - 1.0);
  if (f.meta() && f.meta()->budget.growth) {
    const auto& g = *f.meta()->budget.growth;
    rep.certificate_ok = g.exponent == p && eps >= g.coefficient * (std::pow(3.0, p + 1.0) + 9.0) * (1.0 - 1e-12);
  }

  const TripleSample triples = TripleSample::standard(f.in_dim(), opts.triple_count, opts.triple_radius, opts.seed);
  rep.hypothesis =
      verify_hypothesis_nonuniform(f, phi, opts.norm, opts.norm, triples, opts.hypothesis_t_grid, opts.exec);
  rep.extraction = extract_affine(f, probes, opts.rule, phi.alpha(), opts.exec);

  for (const auto& x : probes) {
    const double closed = phi_tilde_on_axis_closed_form(phi, x);
    const double series = phi_tilde_on_axis(phi, x);
    if (closed > 0.0) rep.closed_form_max_rel_diff = std::max(rep.closed_form_max_rel_diff, std::abs(series - closed) / closed);
  }

  if (rep.extraction.converged) {
    const auto eps_schedule = opts.eps_schedule.empty() ? default_eps_schedule(t_schedule.size()) : opts.eps_schedule;
    rep.limit = verify_uniform_limit(f, rep.extraction, phi, opts.norm, t_schedule, eps_schedule);
  } else {
    rep.limit.findings.push_back({"non-convergence", probes.front(), "extraction did not converge"});
  }
  rep.pass = rep.hypothesis.pass && rep.extraction.converged && rep.limit.pass &&
             rep.closed_form_max_rel_diff <= 1e-9 && rep.certificate_ok.value_or(true);
  return rep;
}

}  // namespace hyerslab
