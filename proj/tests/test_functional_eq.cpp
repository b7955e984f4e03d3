#include <atomic>
#include <memory>

#include "doctest.h"
#include "hyerslab/functional_eq.hpp"
#include "hyerslab/perturb.hpp"
#include "support.hpp"

using namespace hyerslab;

namespace {

TestFunction scalar_fn(std::string name, std::function<double(double)> h) {
  return TestFunction(std::move(name), 1, 1, [h](const Point& x) { return Point::scalar(h(x[0])); });
}

const Point o{0.0};
const Point e{1.0};

}  // namespace

TEST_CASE("Df worked values for x^2") {
  const auto sq = scalar_fn("sq", [](double s) { return s * s; });
  const auto sq_ref = [](long double s) { return s * s; };
  CHECK(eval_D(sq, e, o, o)[0] == 6.0);
  CHECK(eval_D(sq, e, e, e)[0] == 24.0);
  CHECK(static_cast<double>(oracle::defect(sq_ref, 1, 0, 0)) == 6.0);
  CHECK(static_cast<double>(oracle::defect(sq_ref, 1, 1, 1)) == 24.0);
}

TEST_CASE("Df makes exactly seven calls") {
  auto calls = std::make_shared<std::atomic<int>>(0);
  const TestFunction f("count", 2, 1, [calls](const Point& x) {
    ++*calls;
    return Point::scalar(x[0]);
  });
  eval_D(f, Point{1.0, 2.0}, Point{0.5, 0.0}, Point{-1.0, 3.0});
  CHECK(calls->load() == 7);
}

TEST_CASE("Df rejects mixed dimensions") {
  const auto f = make_affine(Matrix{{1.0, 0.0}}, Point{0.0});
  CHECK_THROWS_AS(eval_D(f, Point{1.0, 0.0}, Point{1.0}, Point{1.0, 0.0}), DomainError);
}

TEST_CASE("property: Df of random affine maps vanishes") {
  for_all(31, 300, [](Gen& g, int i) {
    CAPTURE(i);
    const auto d = g.dim();
    const auto m = g.dim();
    const auto f = make_affine(g.matrix(m, d, 5.0), g.point(m, 5.0));
    const Point x = g.point(d, 10.0), y = g.point(d, 10.0), z = g.point(d, 10.0);
    CHECK(norm(eval_D(f, x, y, z)) <= 1e-12 * (1.0 + norm(x) + norm(y) + norm(z)) * 20.0);
  });
}

TEST_CASE("property: Df matches the long double oracle for smooth scalars") {
  const auto h = [](long double s) { return std::sin(s) + 0.25L * s * s * s; };
  const auto f = scalar_fn("smooth", [h](double s) { return static_cast<double>(h(s)); });
  for_all(32, 300, [&](Gen& g, int i) {
    CAPTURE(i);
    const double x = g.real(-3, 3), y = g.real(-3, 3), z = g.real(-3, 3);
    const double ref = static_cast<double>(oracle::defect(h, x, y, z));
    CHECK(eval_D(f, Point{x}, Point{y}, Point{z})[0] == doctest::Approx(ref).epsilon(1e-10).scale(100.0));
  });
}

TEST_CASE("property: Df is linear in f") {
  for_all(33, 200, [](Gen& g, int i) {
    CAPTURE(i);
    const double a = g.real(-2, 2), b = g.real(-2, 2), c1 = g.real(-3, 3), c2 = g.real(-3, 3);
    const auto f1 = scalar_fn("f1", [a](double s) { return a * s * s + std::cos(s); });
    const auto f2 = scalar_fn("f2", [b](double s) { return std::abs(s) * b + s * s * s; });
    const auto comb = linear_combination(c1, f1, c2, f2);
    const Point x{g.real(-2, 2)}, y{g.real(-2, 2)}, z{g.real(-2, 2)};
    const double lhs = eval_D(comb, x, y, z)[0];
    const double rhs = c1 * eval_D(f1, x, y, z)[0] + c2 * eval_D(f2, x, y, z)[0];
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  });
}

TEST_CASE("property: Df(x,0,0) = f(3x) - 3f(x) + 2f(0) and Df is symmetric") {
  const auto f = scalar_fn("mix", [](double s) { return std::exp(0.3 * s) - s * s; });
  for_all(34, 200, [&](Gen& g, int i) {
    CAPTURE(i);
    const double x = g.real(-4, 4), y = g.real(-4, 4), z = g.real(-4, 4);
    const Point px{x}, py{y}, pz{z};
    const double direct = f(Point{3 * x})[0] - 3 * f(px)[0] + 2 * f(o)[0];
    CHECK(std::abs(eval_D(f, px, o, o)[0] - direct) <= 1e-12 * (1.0 + std::abs(direct)) * 10.0);
    const double base = eval_D(f, px, py, pz)[0];
    for (const auto& t : {Triple{py, px, pz}, Triple{pz, py, px}, Triple{px, pz, py}, Triple{py, pz, px}}) {
      CHECK(std::abs(eval_D(f, t)[0] - base) <= 1e-12 * (1.0 + std::abs(base)) * 10.0);
    }
  });
}

TEST_CASE("check_solution examples") {
  const auto samples = TripleSample::standard(1, 500, 5.0, 7);
  const auto affine = make_affine(Matrix::scalar(2.0), Point{1.0});
  const SolutionCheck ok = check_solution(affine, samples);
  CHECK(ok.pass);
  CHECK(ok.max_residual <= 1e-12 * 100);

  const SolutionCheck bad = check_solution(make_violator(ViolatorKind::Quadratic), samples);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual >= 6.0);
  REQUIRE(bad.first_failure);
  CHECK(bad.first_failure->x == e);
  CHECK(bad.first_failure->y == o);
  CHECK(bad.first_failure->z == o);
  CHECK(bad.first_failure_residual == 6.0);

  // Sub-tolerance noise is accepted at the default tolerance.
  const auto noisy = scalar_fn("noisy", [](double s) { return 2 * s + 1 + 1e-14 * std::sin(1e3 * s); });
  CHECK(check_solution(noisy, samples).pass);
}

TEST_CASE("check_solution json and thread independence") {
  const auto samples = TripleSample::standard(2, 400, 3.0, 1);
  const auto f = TestFunction("q2", 2, 1, [](const Point& x) { return Point::scalar(x[0] * x[1]); });
  const Json a = check_solution(f, samples, 1e-9, Exec{1}).to_json();
  const Json b = check_solution(f, samples, 1e-9, Exec{3}).to_json();
  CHECK(canonical_dump(a) == canonical_dump(b));
  CHECK(a.contains("witness"));
  CHECK(a.contains("max_residual"));
  CHECK(a["pass"] == false);
}

TEST_CASE("triple samples contain the degenerate triples") {
  const auto s = TripleSample::standard(2, 100, 1.0, 3);
  CHECK(s.triples.size() == 100);
  const Point z2 = Point::zero(2), e0 = Point::unit(2, 0);
  auto has = [&](const Point& x, const Point& y, const Point& z) {
    for (const auto& t : s.triples)
      if (t.x == x && t.y == y && t.z == z) return true;
    return false;
  };
  CHECK(has(z2, z2, z2));
  CHECK(has(e0, z2, z2));
  CHECK(has(e0, -e0, -e0));
  const auto again = TripleSample::standard(2, 100, 1.0, 3);
  for (std::size_t i = 0; i < s.triples.size(); ++i) CHECK(again.triples[i].z == s.triples[i].z);
}

TEST_CASE("substitution suite examples") {
  const std::vector<Point> probes{Point{-2.0}, Point{-1.0}, Point{0.5}, Point{1.0}, Point{3.0}};
  const auto affine = substitution_suite(make_affine(Matrix::scalar(2.0), Point{1.0}), probes);
  CHECK(affine.all_pass());
  CHECK(affine.triple_scaling.max_residual == 0.0);
  CHECK(affine.raw_negation.pass);

  const auto abs_rep = substitution_suite(make_violator(ViolatorKind::AbsoluteValue), {Point{1.0}, Point{2.0}});
  CHECK(abs_rep.triple_scaling.pass);
  CHECK_FALSE(abs_rep.oddness.pass);
  REQUIRE_FALSE(abs_rep.oddness.witness.empty());
  CHECK(abs_rep.oddness.witness.front() == Point{1.0});

  const auto cube = substitution_suite(make_violator(ViolatorKind::Cubic), {Point{1.0}});
  CHECK_FALSE(cube.triple_scaling.pass);
  CHECK(cube.triple_scaling.witness_residual == doctest::Approx(24.0));  // |27 - 3|

  const Json j = affine.triple_scaling.to_json();
  for (const char* key : {"check_name", "pass", "max_residual", "witness"}) CHECK(j.contains(key));
}

TEST_CASE("affine decomposition examples") {
  const std::vector<Point> probes{Point{-1.5}, Point{0.0}, Point{1.0}, Point{2.0}};
  const auto shifted = affine_decompose(make_affine(Matrix::scalar(2.0), Point{1.0}), probes);
  CHECK(shifted.is_affine());
  CHECK(shifted.constant == Point{1.0});
  const auto linear = affine_decompose(make_affine(Matrix::scalar(2.0), Point{0.0}), probes);
  CHECK(linear.is_affine());
  CHECK(linear.constant == Point{0.0});

  const auto sq = affine_decompose(make_violator(ViolatorKind::Quadratic), {Point{1.0}});
  CHECK_FALSE(sq.additivity.pass);
  REQUIRE(sq.additivity.witness.size() == 2);
  CHECK(sq.additivity.witness[0] == Point{1.0});
  CHECK(sq.additivity.witness[1] == Point{1.0});
  CHECK(sq.additivity.witness_residual == doctest::Approx(2.0));  // g(2) - 2 g(1) = 4 - 2
  CHECK_THROWS_AS(affine_decompose(make_violator(ViolatorKind::Quadratic), {}), DomainError);
}

TEST_CASE("property: affine maps pass the substitution suite and decomposition") {
  for_all(35, 100, [](Gen& g, int i) {
    CAPTURE(i);
    const auto d = g.dim();
    const auto m = g.dim();
    const auto f = make_affine(g.matrix(m, d, 3.0), g.point(m, 3.0));
    std::vector<Point> probes;
    for (int k = 0; k < 6; ++k) probes.push_back(g.point(d, 2.0));
    const auto subs = substitution_suite(f, probes, 1e-12 * 100);
    CHECK(subs.all_pass());
    const auto dec = affine_decompose(f, probes, 1e-12 * 100);
    CHECK(dec.is_affine());
  });
}
