#include "hyerslab/functional_eq.hpp"

#include <algorithm>

#include "hyerslab/rng.hpp"

namespace hyerslab {

Json to_json(const Triple& t) { return Json::array({to_json(t.x), to_json(t.y), to_json(t.z)}); }

TripleSample TripleSample::standard(std::size_t dim, std::size_t count, double radius, std::uint64_t seed) {
  TripleSample s;
  s.seed = seed;
  const Point o = Point::zero(dim);
  s.triples.push_back({o, o, o});
  for (std::size_t i = 0; i < dim; ++i) {
    const Point e = Point::unit(dim, i);
    s.triples.push_back({e, o, o});
    s.triples.push_back({o, e, o});
    s.triples.push_back({o, o, e});
    s.triples.push_back({e, -e, -e});
    s.triples.push_back({e, e, -e});
    s.triples.push_back({e, e, e});
  }
  Rng rng(seed);
  for (int k = 0; k < 8; ++k) {
    const Point x = rng.in_cube(dim, radius);
    const Point y = rng.in_cube(dim, radius);
    s.triples.push_back({x, o, o});
    s.triples.push_back({x, -x, -x});
    s.triples.push_back({x, y, -y});
  }
  while (s.triples.size() < count) {
    Point x = rng.in_cube(dim, radius);
    Point y = rng.in_cube(dim, radius);
    Point z = rng.in_cube(dim, radius);
    s.triples.push_back({x, y, z});
  }
  return s;
}

Point eval_D(const TestFunction& f, const Point& x, const Point& y, const Point& z) {
  require_same_dim(x, y, "eval_D");
  require_same_dim(x, z, "eval_D");
  const Point sum = x + y + z;
  Point d = f(sum + 2.0 * x);
  d += f(sum + 2.0 * y);
  d += f(sum + 2.0 * z);
  d += f(x);
  d += f(y);
  d += f(z);
  d -= 6.0 * f(sum);
  return d;
}

void IdentityCheck::record(double residual, double tol, std::vector<Point> args) {
  max_residual = std::max(max_residual, residual);
  if (residual > tol && pass) {
    pass = false;
    witness = std::move(args);
    witness_residual = residual;
  }
}

Json IdentityCheck::to_json() const {
  Json w = Json::array();
  for (const auto& p : witness) w.push_back(hyerslab::to_json(p));
  return Json{{"check_name", check_name},
              {"pass", pass},
              {"max_residual", max_residual},
              {"witness", witness.empty() ? Json(nullptr) : w},
              {"witness_residual", witness_residual}};
}

Json SolutionCheck::to_json() const {
  Json j{{"check_name", "Df=0"},
         {"pass", pass},
         {"max_residual", max_residual},
         {"triples_checked", triples_checked}};
  j["max_witness"] = max_witness ? hyerslab::to_json(*max_witness) : Json(nullptr);
  j["witness"] = first_failure ? hyerslab::to_json(*first_failure) : Json(nullptr);
  j["witness_residual"] = first_failure_residual;
  return j;
}

SolutionCheck check_solution(const TestFunction& f, const TripleSample& samples, double tol, Exec exec) {
  std::vector<double> residuals(samples.triples.size());
  parallel_for(residuals.size(), exec,
               [&](std::size_t i) { residuals[i] = norm(eval_D(f, samples.triples[i])); });
  SolutionCheck out;
  out.triples_checked = residuals.size();
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const double r = residuals[i];
    if (!out.max_witness || r > out.max_residual) {
      out.max_residual = r;
      out.max_witness = samples.triples[i];
    }
    if (r > tol && out.pass) {
      out.pass = false;
      out.first_failure = samples.triples[i];
      out.first_failure_residual = r;
    }
  }
  return out;
}

Json SubstitutionReport::to_json() const {
  return Json{{"checks", Json::array({triple_scaling.to_json(), oddness.to_json(), midpoint.to_json()})},
              {"raw_negation", raw_negation.to_json()},
              {"pass", all_pass()}};
}

SubstitutionReport substitution_suite(const TestFunction& f, const std::vector<Point>& probes, double tol) {
  SubstitutionReport rep;
  if (probes.empty()) return rep;
  const Point f0 = f(Point::zero(f.in_dim()));
  auto g = [&](const Point& x) { return f(x) - f0; };

  for (const auto& x : probes) {
    const Point gx = g(x);
    const Point g_neg = g(-x);
    rep.triple_scaling.record(norm(g(3.0 * x) - 3.0 * gx), tol, {x});
    rep.oddness.record(norm(g_neg + gx), tol, {x});
    rep.raw_negation.record(norm(2.0 * gx + 2.0 * g(-3.0 * x) + 2.0 * g_neg - 6.0 * g_neg), tol, {x});
  }
  const std::size_t n = probes.size();
  const std::size_t span = std::min<std::size_t>(n, 8);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < span; ++k) {
      const Point& x = probes[i];
      const Point& y = probes[(i + k) % n];
      const Point lhs = g(x + 2.0 * y) + g(x - 2.0 * y);
      rep.midpoint.record(norm(lhs - 2.0 * g(x)), tol, {x, y});
    }
  }
  return rep;
}

Json AffineDecomposition::to_json() const {
  return Json{{"checks", Json::array({additivity.to_json(), scaling.to_json()})},
              {"constant", hyerslab::to_json(constant)},
              {"pass", is_affine()}};
}

AffineDecomposition affine_decompose(const TestFunction& a, const std::vector<Point>& probes, double tol) {
  if (probes.empty()) throw DomainError("affine_decompose: probes must be nonempty");
  AffineDecomposition out;
  out.constant = a(Point::zero(a.in_dim()));
  auto g = [&](const Point& x) { return a(x) - out.constant; };

  for (const auto& x : probes) out.scaling.record(norm(g(3.0 * x) - 3.0 * g(x)), tol, {x});

  const std::size_t n = probes.size();
  auto check_pair = [&](const Point& u, const Point& v) {
    const Point gu = g(u);
    const Point gv = g(v);
    const double direct = norm(g(u + v) - (gu + gv));
    // x = (u+v)/2, y = (u-v)/4 in g(x+2y) + g(x-2y) = 2g(x).
    const double midpoint = norm(gu + gv - 2.0 * g(0.5 * (u + v)));
    out.additivity.record(std::max(direct, midpoint), tol, {u, v});
  };
  for (std::size_t i = 0; i < n; ++i) check_pair(probes[i], probes[i]);
  const std::size_t span = std::min<std::size_t>(n, 16);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < span; ++k) check_pair(probes[i], probes[(i + k) % n]);
  }
  return out;
}

}  // namespace hyerslab
