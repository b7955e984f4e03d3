#include "hyerslab/fuzzy_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hyerslab/rng.hpp"

namespace hyerslab {

Membership::Membership(double v) : v_(v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError("membership value outside [0, 1]: " + std::to_string(v));
  }
}

// ---------------------------------------------------------------------------
// FuzzyNormSpec

FuzzyNormSpec FuzzyNormSpec::crisp_induced(double p, BaseNorm base) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("CrispInduced requires p > 0");
  FuzzyNormSpec s;
  s.kind_ = FuzzyNormKind::CrispInduced;
  s.p_ = p;
  s.base_ = base;
  s.name_ = "crisp_induced";
  return s;
}

FuzzyNormSpec FuzzyNormSpec::quadratic_ratio(BaseNorm base) {
  FuzzyNormSpec s;
  s.kind_ = FuzzyNormKind::QuadraticRatio;
  s.base_ = base;
  s.name_ = "quadratic_ratio";
  return s;
}

FuzzyNormSpec FuzzyNormSpec::indicator(BaseNorm base) {
  FuzzyNormSpec s;
  s.kind_ = FuzzyNormKind::Indicator;
  s.base_ = base;
  s.name_ = "indicator";
  return s;
}

FuzzyNormSpec FuzzyNormSpec::custom(std::string name, Evaluator eval, BaseNorm base) {
  if (!eval) throw DomainError("custom fuzzy norm needs an evaluator");
  FuzzyNormSpec s;
  s.kind_ = FuzzyNormKind::Custom;
  s.base_ = base;
  s.name_ = std::move(name);
  s.custom_ = std::move(eval);
  return s;
}

double FuzzyNormSpec::evaluate(const Point& x, double t) const {
  if (kind_ == FuzzyNormKind::Custom) return custom_(x, t);
  if (t <= 0.0) return 0.0;
  const double a = norm(x, base_);
  switch (kind_) {
    case FuzzyNormKind::CrispInduced:
      return t / (t + p_ * a);
    case FuzzyNormKind::QuadraticRatio: {
      if (t <= a) return 0.0;
      // (t - a)(t + a) keeps the numerator accurate near t = a.
      return ((t - a) * (t + a)) / (t * t + a * a);
    }
    case FuzzyNormKind::Indicator:
      return t > a ? 1.0 : 0.0;
    case FuzzyNormKind::Custom:
      break;
  }
  return 0.0;
}

Json FuzzyNormSpec::to_json() const {
  Json j;
  switch (kind_) {
    case FuzzyNormKind::CrispInduced:
      j["kind"] = "crisp_induced";
      j["p"] = p_;
      break;
    case FuzzyNormKind::QuadraticRatio: j["kind"] = "quadratic_ratio"; break;
    case FuzzyNormKind::Indicator: j["kind"] = "indicator"; break;
    case FuzzyNormKind::Custom:
      j["kind"] = "custom";
      j["name"] = name_;
      break;
  }
  j["base"] = to_string(base_);
  return j;
}

FuzzyNormSpec FuzzyNormSpec::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw DomainError("fuzzy norm: expected an object with a string 'kind'");
  }
  const BaseNorm base = base_norm_from_string(j.value("base", std::string("euclidean")));
  const auto kind = j["kind"].get<std::string>();
  if (kind == "crisp_induced") {
    if (!j.contains("p") || !j["p"].is_number()) throw DomainError("fuzzy norm: crisp_induced needs numeric 'p'");
    return crisp_induced(j["p"].get<double>(), base);
  }
  if (kind == "quadratic_ratio") return quadratic_ratio(base);
  if (kind == "indicator") return indicator(base);
  throw DomainError("fuzzy norm: unknown kind '" + kind + "'");
}

Membership eval_norm(const FuzzyNormSpec& spec, const Point& x, double t) {
  require_finite(x, "eval_norm");
  if (!std::isfinite(t)) throw DomainError("eval_norm: non-finite t");
  return Membership(spec.evaluate(x, t));
}

double level_radius(const FuzzyNormSpec& spec, const Point& x, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level_radius: level must lie in (0, 1)");
  const double a = norm(x, spec.base());
  switch (spec.kind()) {
    case FuzzyNormKind::CrispInduced:
      return level * spec.p() * a / (1.0 - level);
    case FuzzyNormKind::QuadraticRatio:
      return a * std::sqrt((1.0 + level) / (1.0 - level));
    case FuzzyNormKind::Indicator:
      return a;
    case FuzzyNormKind::Custom:
      break;
  }
  double hi = 1.0;
  while (spec.evaluate(x, hi) < level) {
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  double lo = hi / 2.0;
  while (lo > 1e-300 && spec.evaluate(x, lo) >= level) lo /= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (spec.evaluate(x, mid) >= level ? hi : lo) = mid;
  }
  return hi;
}

double derivative_bound(const FuzzyNormSpec& spec, const Point& x, double t_lo, double t_hi) {
  const double a = norm(x, spec.base());
  switch (spec.kind()) {
    case FuzzyNormKind::CrispInduced: {
      if (t_hi <= 0.0) return 0.0;
      // p a / (t + p a)^2 decreases for t > 0.
      const double t = std::max(t_lo, 0.0);
      const double pa = spec.p() * a;
      return pa / ((t + pa) * (t + pa));
    }
    case FuzzyNormKind::QuadraticRatio: {
      if (t_hi <= a) return 0.0;
      // 4 a^2 t / (t^2 + a^2)^2 decreases for t > a / sqrt(3).
      const double t = std::max(t_lo, a);
      const double den = t * t + a * a;
      return 4.0 * a * a * t / (den * den);
    }
    case FuzzyNormKind::Indicator:
      return 0.0;
    case FuzzyNormKind::Custom:
      break;
  }
  throw DomainError("derivative_bound: no closed form for custom norms");
}

// ---------------------------------------------------------------------------
// SamplePlan

void SamplePlan::validate() const {
  if (points.empty()) throw DomainError("sample plan: no points");
  const std::size_t dim = points.front().dim();
  bool has_zero = false;
  for (const auto& p : points) {
    if (p.dim() != dim) throw DomainError("sample plan: points of mixed dimension");
    require_finite(p, "sample plan");
    has_zero = has_zero || p.is_zero();
  }
  if (!has_zero) throw DomainError("sample plan: points must contain the zero vector");
  if (t_grid.size() < 2) throw DomainError("sample plan: t_grid needs at least two entries");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("sample plan: t_grid must be strictly increasing");
  }
  if (!std::isfinite(t_grid.front()) || !std::isfinite(t_grid.back())) {
    throw DomainError("sample plan: non-finite t");
  }
  if (!(t_grid.front() <= 0.0) || !(t_grid.back() > 0.0)) {
    throw DomainError("sample plan: t_grid must contain some t <= 0 and some t > 0");
  }
  for (double c : scalars) {
    if (c == 0.0 || !std::isfinite(c)) throw DomainError("sample plan: scalars must be finite and nonzero");
  }
}

SamplePlan SamplePlan::standard(std::size_t dim, std::uint64_t seed) {
  SamplePlan plan;
  plan.points.push_back(Point::zero(dim));
  for (double r : {1e-3, 1.0, 10.0}) {
    for (std::size_t i = 0; i < dim; ++i) {
      plan.points.push_back(r * Point::unit(dim, i));
      plan.points.push_back(-r * Point::unit(dim, i));
    }
  }
  Point diag(dim);
  for (std::size_t i = 0; i < dim; ++i) diag[i] = 0.5 + 0.25 * static_cast<double>(i);
  plan.points.push_back(diag);
  plan.t_grid = {-10.0, -1.0, -1e-3, 0.0};
  for (int k = -40; k <= 40; ++k) plan.t_grid.push_back(std::pow(10.0, k / 10.0));
  plan.scalars = {-3.0, -1.0, -0.5, 0.25, 2.0, 7.0};
  plan.pair_count = 500;
  plan.seed = seed;
  return plan;
}

SamplePlan SamplePlan::random(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  SamplePlan plan;
  plan.seed = seed;
  plan.points.push_back(Point::zero(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    plan.points.push_back(rng.signed_log_uniform(1e-3, 1e3) * Point::unit(dim, i));
  }
  for (int k = 0; k < 6; ++k) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = rng.signed_log_uniform(1e-3, 1e3);
    plan.points.push_back(p);
  }
  std::set<double> grid{0.0};
  const int negatives = 2 + static_cast<int>(rng.index(3));
  for (int k = 0; k < negatives; ++k) grid.insert(-std::exp(rng.uniform(std::log(1e-6), std::log(1e2))));
  for (int k = 0; k < 40; ++k) grid.insert(std::exp(rng.uniform(std::log(1e-4), std::log(1e4))));
  plan.t_grid.assign(grid.begin(), grid.end());
  for (int k = 0; k < 5; ++k) plan.scalars.push_back(rng.signed_log_uniform(1e-2, 1e2));
  plan.pair_count = 200;
  return plan;
}

Json SamplePlan::to_json() const {
  Json pts = Json::array();
  for (const auto& p : points) pts.push_back(hyerslab::to_json(p));
  return Json{{"points", pts},
              {"t_grid", t_grid},
              {"scalars", scalars},
              {"pair_count", pair_count},
              {"seed", seed}};
}

std::string SamplePlan::digest() const { return content_digest(to_json()); }

// ---------------------------------------------------------------------------
// Axiom checking

std::string to_string(Axiom a) {
  static constexpr const char* kNames[] = {"N1", "N2", "N3", "N4", "N5", "N6"};
  return kNames[static_cast<std::size_t>(a)];
}

bool AxiomReport::all_pass() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

Json AxiomReport::to_json() const {
  Json axioms;
  for (std::size_t i = 0; i < holds.size(); ++i) axioms[to_string(static_cast<Axiom>(i))] = holds[i];
  Json cex = Json::array();
  for (const auto& c : counterexamples) {
    Json e{{"axiom", to_string(c.axiom)},
           {"x", hyerslab::to_json(c.x)},
           {"t", c.t},
           {"lhs", c.lhs},
           {"rhs", c.rhs},
           {"note", c.note}};
    if (c.y) e["y"] = hyerslab::to_json(*c.y);
    if (c.s) e["s"] = *c.s;
    if (c.c) e["c"] = *c.c;
    cex.push_back(std::move(e));
  }
  return Json{{"axioms", axioms},
              {"counterexamples", cex},
              {"seed", seed},
              {"plan_digest", plan_digest},
              {"notes", notes}};
}

namespace {

class AxiomChecker {
 public:
  AxiomChecker(const FuzzyNormSpec& spec, const SamplePlan& plan, const AxiomTolerances& tol)
      : spec_(spec), plan_(plan), tol_(tol) {}

  AxiomReport run() {
    plan_.validate();
    report_.seed = plan_.seed;
    report_.plan_digest = plan_.digest();
    check_n1();
    check_n2();
    check_n3();
    check_n4();
    check_n5();
    check_n6();
    return std::move(report_);
  }

 private:
  double n(const Point& x, double t) const { return eval_norm(spec_, x, t).value(); }

  void fail(AxiomCounterexample cex) {
    const auto idx = static_cast<std::size_t>(cex.axiom);
    report_.holds[idx] = false;
    if (++recorded_[idx] <= tol_.max_counterexamples) report_.counterexamples.push_back(std::move(cex));
  }

  void check_n1() {
    for (const auto& x : plan_.points) {
      for (double t : plan_.t_grid) {
        if (t > 0.0) break;
        const double v = n(x, t);
        if (v != 0.0) fail({Axiom::N1, x, {}, t, {}, {}, v, 0.0, "N(x, t) must vanish for t <= 0"});
      }
    }
  }

  void check_n2() {
    for (const auto& x : plan_.points) {
      if (x.is_zero()) {
        for (double t : plan_.t_grid) {
          if (t <= 0.0) continue;
          const double v = n(x, t);
          if (v != 1.0) fail({Axiom::N2, x, {}, t, {}, {}, v, 1.0, "N(0, t) must be 1 for t > 0"});
        }
        continue;
      }
      bool below_one = false;
      for (double t : plan_.t_grid) {
        if (t > 0.0 && n(x, t) < 1.0) {
          below_one = true;
          break;
        }
      }
      if (!below_one) {
        fail({Axiom::N2, x, {}, plan_.t_grid.back(), {}, {}, 1.0, 1.0,
              "nonzero x has membership 1 at every sampled t > 0"});
      }
    }
  }

  void check_n3() {
    for (const auto& x : plan_.points) {
      for (double c : plan_.scalars) {
        const Point cx = c * x;
        for (double t : plan_.t_grid) {
          const double lhs = n(cx, t);
          const double rhs = n(x, t / std::abs(c));
          if (std::abs(lhs - rhs) > tol_.identity) {
            fail({Axiom::N3, x, {}, t, {}, c, lhs, rhs, "N(cx, t) != N(x, t/|c|)"});
          }
        }
      }
    }
  }

  void check_n4() {
    Rng rng(derive_seed(plan_.seed, 4));
    const auto& pts = plan_.points;
    const auto& grid = plan_.t_grid;
    for (std::size_t k = 0; k < plan_.pair_count; ++k) {
      const Point& x = pts[rng.index(pts.size())];
      const Point& y = pts[rng.index(pts.size())];
      const double t = grid[rng.index(grid.size())];
      const double s = grid[rng.index(grid.size())];
      const double lhs = n(x + y, t + s);
      const double rhs = std::min(n(x, t), n(y, s));
      if (lhs < rhs - tol_.identity) {
        fail({Axiom::N4, x, y, t, s, {}, lhs, rhs, "N(x+y, t+s) < min(N(x,t), N(y,s))"});
      }
    }
  }

  void check_n5() {
    const double kappa = spec_.kind() == FuzzyNormKind::CrispInduced ? spec_.p() : 1.0;
    for (const auto& x : plan_.points) {
      double prev = n(x, plan_.t_grid.front());
      for (std::size_t k = 1; k < plan_.t_grid.size(); ++k) {
        const double t = plan_.t_grid[k];
        const double cur = n(x, t);
        if (cur < prev - tol_.identity) {
          fail({Axiom::N5, x, {}, t, {}, {}, cur, prev, "membership decreased along the t grid"});
        }
        prev = cur;
      }
      const double big_t = tol_.tail_radius_factor * (1.0 + kappa * norm(x, spec_.base()));
      const double tail = n(x, big_t);
      if (tail < 1.0 - tol_.tail) {
        fail({Axiom::N5, x, {}, big_t, {}, {}, tail, 1.0 - tol_.tail, "N(x, T) has not approached 1 at large T"});
      }
    }
  }

  // Follows the half with the larger increment; returns the final bracket.
  std::pair<double, double> bisect_towards_jump(const Point& x, double lo, double hi, int depth) const {
    double n_lo = n(x, lo);
    double n_hi = n(x, hi);
    for (int i = 0; i < depth; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double n_mid = n(x, mid);
      if (std::abs(n_mid - n_lo) >= std::abs(n_hi - n_mid)) {
        hi = mid;
        n_hi = n_mid;
      } else {
        lo = mid;
        n_lo = n_mid;
      }
    }
    return {lo, hi};
  }

  void check_n6() {
    constexpr int kCoarse = 20;
    constexpr int kFine = 40;
    for (const auto& x : plan_.points) {
      if (x.is_zero()) continue;
      for (std::size_t k = 1; k < plan_.t_grid.size(); ++k) {
        const double lo = plan_.t_grid[k - 1];
        const double hi = plan_.t_grid[k];
        const double jump = std::abs(n(x, hi) - n(x, lo));
        bool continuous = true;
        if (spec_.has_closed_form()) {
          continuous = jump <= derivative_bound(spec_, x, lo, hi) * (hi - lo) + tol_.identity;
        } else {
          // Lipschitz surrogate: the divided difference seen at the coarse
          // refinement must still bound the increment at the fine one.
          const auto [c_lo, c_hi] = bisect_towards_jump(x, lo, hi, kCoarse);
          const double slope = std::abs(n(x, c_hi) - n(x, c_lo)) / (c_hi - c_lo);
          const auto [f_lo, f_hi] = bisect_towards_jump(x, lo, hi, kFine);
          const double fine_jump = std::abs(n(x, f_hi) - n(x, f_lo));
          continuous = fine_jump <= 4.0 * slope * (f_hi - f_lo) + tol_.identity;
        }
        if (!continuous) {
          const auto [j_lo, j_hi] = bisect_towards_jump(x, lo, hi, 60);
          const double where = 0.5 * (j_lo + j_hi);
          fail({Axiom::N6, x, {}, where, {}, {}, n(x, j_hi), n(x, j_lo),
                "membership jumps between t = " + std::to_string(j_lo) + " and t = " + std::to_string(j_hi)});
          if (spec_.kind() == FuzzyNormKind::Indicator && !indicator_noted_) {
            indicator_noted_ = true;
            report_.notes.push_back(
                "indicator norm is discontinuous in t at t = ||x||, so N6 fails by construction; "
                "it is a stress input, not a certified fuzzy norm");
          }
        }
      }
    }
  }

  const FuzzyNormSpec& spec_;
  const SamplePlan& plan_;
  AxiomTolerances tol_;
  AxiomReport report_;
  std::array<std::size_t, 6> recorded_{};
  bool indicator_noted_ = false;
};

}  // namespace

AxiomReport check_axioms(const FuzzyNormSpec& spec, const SamplePlan& plan, const AxiomTolerances& tol) {
  return AxiomChecker(spec, plan, tol).run();
}

AxiomReport check_axioms_batch(const FuzzyNormSpec& spec, std::size_t dim, std::size_t count,
                               std::uint64_t seed, Exec exec, const AxiomTolerances& tol) {
  std::vector<AxiomReport> reports(count);
  parallel_for(count, exec, [&](std::size_t i) {
    reports[i] = check_axioms(spec, SamplePlan::random(dim, derive_seed(seed, i)), tol);
  });
  AxiomReport merged;
  merged.seed = seed;
  std::string digests;
  std::set<std::string> notes;
  for (const auto& r : reports) {
    for (std::size_t a = 0; a < 6; ++a) merged.holds[a] = merged.holds[a] && r.holds[a];
    for (const auto& c : r.counterexamples) {
      const auto per_axiom = std::count_if(merged.counterexamples.begin(), merged.counterexamples.end(),
                                           [&](const auto& m) { return m.axiom == c.axiom; });
      if (static_cast<std::size_t>(per_axiom) < tol.max_counterexamples) merged.counterexamples.push_back(c);
    }
    notes.insert(r.notes.begin(), r.notes.end());
    digests += r.plan_digest;
  }
  merged.notes.assign(notes.begin(), notes.end());
  merged.plan_digest = sha256_hex(digests);
  return merged;
}

// ---------------------------------------------------------------------------
// Sequences

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

}  // namespace

SequenceVerdict fuzzy_limit_test(const Sequence& seq, const Point& limit, const FuzzyNormSpec& spec,
                                 const std::vector<double>& t_probe, double eps, int n_max) {
  if (t_probe.empty()) throw DomainError("fuzzy_limit_test: empty t_probe");
  if (n_max < 1) throw DomainError("fuzzy_limit_test: n_max must be >= 1");
  check_eps(eps);
  std::vector<Point> gaps;
  gaps.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int k = 0; k <= n_max; ++k) gaps.push_back(seq(k) - limit);

  int witness = 0;
  for (double t : t_probe) {
    if (!(t > 0.0)) throw DomainError("fuzzy_limit_test: probe radii must be positive");
    int n0 = n_max + 1;
    while (n0 > 0 && eval_norm(spec, gaps[static_cast<std::size_t>(n0 - 1)], t).value() > 1.0 - eps) --n0;
    if (n0 > n_max) return {false, std::nullopt};
    witness = std::max(witness, n0);
  }
  return {true, witness};
}

SequenceVerdict fuzzy_cauchy_test(const Sequence& seq, const FuzzyNormSpec& spec, double delta, double eps,
                                  int n_max) {
  if (!(delta > 0.0)) throw DomainError("fuzzy_cauchy_test: delta must be positive");
  if (n_max < 1) throw DomainError("fuzzy_cauchy_test: n_max must be >= 1");
  check_eps(eps);
  std::vector<Point> terms;
  terms.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int k = 0; k <= n_max; ++k) terms.push_back(seq(k));

  const double level = 1.0 - eps;
  const Point zero = Point::zero(terms.front().dim());
  if (!(eval_norm(spec, zero, delta).value() > level)) return {false, std::nullopt};
  // Tail [n0, n_max] is Cauchy iff [n0+1, n_max] is and x_{n0} is close to every later term.
  int n0 = n_max;
  while (n0 > 0) {
    const auto& head = terms[static_cast<std::size_t>(n0 - 1)];
    bool close = true;
    for (int m = n0; m <= n_max && close; ++m) {
      close = eval_norm(spec, terms[static_cast<std::size_t>(m)] - head, delta).value() > level;
    }
    if (!close) break;
    --n0;
  }
  // A one-term tail is Cauchy vacuously; require at least one pair.
  if (n0 >= n_max) return {false, std::nullopt};
  return {true, n0};
}

Sequence sequence_of(std::vector<Point> terms) {
  return [terms = std::move(terms)](int n) {
    if (n < 0 || static_cast<std::size_t>(n) >= terms.size()) throw DomainError("sequence index out of range");
    return terms[static_cast<std::size_t>(n)];
  };
}

}  // namespace hyerslab
