#include "doctest.h"
#include "hyerslab/fuzzy_norm.hpp"
#include "support.hpp"

using namespace hyerslab;

namespace {

FuzzyNormSpec broken_at_zero(double p) {
  return FuzzyNormSpec::custom("broken-at-zero", [p](const Point& x, double t) {
    if (t == 0.0) return 0.5;
    return t > 0.0 ? t / (t + p * norm(x)) : 0.0;
  });
}

std::vector<FuzzyNormSpec> shipped_norms() {
  return {FuzzyNormSpec::crisp_induced(0.5), FuzzyNormSpec::crisp_induced(1.0), FuzzyNormSpec::crisp_induced(2.0),
          FuzzyNormSpec::quadratic_ratio()};
}

}  // namespace

TEST_CASE("eval_norm worked values") {
  const auto n1 = FuzzyNormSpec::crisp_induced(1.0);
  CHECK(eval_norm(n1, Point{1.0}, 1.0).value() == doctest::Approx(0.5));
  CHECK(eval_norm(FuzzyNormSpec::quadratic_ratio(), Point{1.0}, std::sqrt(3.0)).value() == doctest::Approx(0.5));
  for (const auto& spec : shipped_norms()) {
    CHECK(eval_norm(spec, Point{0.3, -2.0}, -2.0).value() == 0.0);
    CHECK(eval_norm(spec, Point{0.3, -2.0}, 0.0).value() == 0.0);
  }
  CHECK(eval_norm(FuzzyNormSpec::indicator(), Point{1.0}, 1.0).value() == 0.0);
  CHECK(eval_norm(FuzzyNormSpec::indicator(), Point{1.0}, 1.0000001).value() == 1.0);
  CHECK(eval_norm(FuzzyNormSpec::quadratic_ratio(), Point{2.0}, 2.0).value() == 0.0);
}

TEST_CASE("eval_norm rejects bad input") {
  const auto n1 = FuzzyNormSpec::crisp_induced(1.0);
  CHECK_THROWS_AS(eval_norm(n1, Point{std::nan("")}, 1.0), DomainError);
  CHECK_THROWS_AS(eval_norm(n1, Point{1.0}, std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(FuzzyNormSpec::crisp_induced(0.0), DomainError);
  CHECK_THROWS_AS(FuzzyNormSpec::crisp_induced(-1.0), DomainError);
  CHECK_THROWS_AS(Membership(1.5), DomainError);
}

TEST_CASE("closed forms agree with reference formulas") {
  for_all(21, 500, [](Gen& g, int i) {
    CAPTURE(i);
    const Point x = g.point(g.dim(), 50.0);
    const double t = g.wide(-4, 4);
    const double p = g.real(0.1, 3.0);
    CHECK(eval_norm(FuzzyNormSpec::crisp_induced(p), x, t).value() ==
          doctest::Approx(oracle::crisp(p, norm(x), t)).epsilon(1e-14));
    CHECK(eval_norm(FuzzyNormSpec::quadratic_ratio(), x, t).value() ==
          doctest::Approx(oracle::quadratic(norm(x), t)).epsilon(1e-14));
  });
}

TEST_CASE("property: membership lies in [0,1], is monotone in t and satisfies N3") {
  for_all(22, 300, [](Gen& g, int i) {
    CAPTURE(i);
    const Point x = g.point(g.dim(), 100.0);
    const double c = g.wide(-2, 2);
    std::vector<double> ts;
    for (int k = 0; k < 20; ++k) ts.push_back(g.wide(-5, 5));
    std::sort(ts.begin(), ts.end());
    for (const auto& spec : shipped_norms()) {
      double prev = 0.0;
      for (double t : ts) {
        const double v = eval_norm(spec, x, t).value();
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v >= prev);
        prev = v;
        CHECK(std::abs(eval_norm(spec, c * x, t).value() - eval_norm(spec, x, t / std::abs(c)).value()) <= 1e-12);
      }
    }
  });
}

TEST_CASE("level_radius inverts the membership") {
  for_all(23, 100, [](Gen& g, int i) {
    CAPTURE(i);
    const Point x = g.point(2, 10.0);
    const double level = g.real(0.01, 0.99);
    for (const auto& spec : shipped_norms()) {
      const double r = level_radius(spec, x, level);
      CHECK(eval_norm(spec, x, r).value() == doctest::Approx(level).epsilon(1e-9));
    }
    const auto custom = FuzzyNormSpec::custom("crisp-copy", [](const Point& y, double t) {
      return t > 0.0 ? t / (t + norm(y)) : 0.0;
    });
    CHECK(level_radius(custom, x, level) == doctest::Approx(level * norm(x) / (1.0 - level)).epsilon(1e-9));
  });
}

TEST_CASE("axioms hold for the shipped norms on the standard plan") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto plan = SamplePlan::standard(d, 5);
    for (const auto& spec : shipped_norms()) {
      CAPTURE(spec.to_json().dump());
      const AxiomReport rep = check_axioms(spec, plan);
      CHECK(rep.all_pass());
      CHECK(rep.counterexamples.empty());
    }
  }
}

TEST_CASE("axioms hold on random plans") {
  for (const auto& spec : shipped_norms()) {
    CAPTURE(spec.to_json().dump());
    CHECK(check_axioms_batch(spec, 3, 50, 99).all_pass());
  }
}

TEST_CASE("N5 tail holds for large points when p > 1") {
  SamplePlan plan = SamplePlan::standard(1, 0);
  plan.points.push_back(Point{1e3});
  const AxiomReport rep = check_axioms(FuzzyNormSpec::crisp_induced(2.0), plan);
  CHECK(rep.passes(Axiom::N5));
}

TEST_CASE("broken-at-zero variant fails N1 at t = 0") {
  const AxiomReport rep = check_axioms(broken_at_zero(1.0), SamplePlan::standard(1, 0));
  CHECK_FALSE(rep.passes(Axiom::N1));
  bool found = false;
  for (const auto& c : rep.counterexamples) {
    if (c.axiom == Axiom::N1 && c.t == 0.0) found = true;
  }
  CHECK(found);
  CHECK(rep.to_json()["axioms"]["N1"] == false);
}

TEST_CASE("indicator fails N6 and the report says so") {
  const AxiomReport rep = check_axioms(FuzzyNormSpec::indicator(), SamplePlan::standard(2, 0));
  CHECK_FALSE(rep.passes(Axiom::N6));
  for (auto a : {Axiom::N1, Axiom::N2, Axiom::N3, Axiom::N4, Axiom::N5}) CHECK(rep.passes(a));
  REQUIRE_FALSE(rep.notes.empty());
  CHECK(rep.notes.front().find("discontinuous") != std::string::npos);
  // The jump is located at t = ||x|| for some sampled x.
  bool located = false;
  for (const auto& c : rep.counterexamples) {
    if (c.axiom == Axiom::N6 && std::abs(c.t - norm(c.x)) <= 1e-9 * (1.0 + norm(c.x))) located = true;
  }
  CHECK(located);
}

TEST_CASE("axiom report json layout") {
  const Json j = check_axioms(FuzzyNormSpec::crisp_induced(1.0), SamplePlan::standard(1, 3)).to_json();
  for (const char* key : {"axioms", "counterexamples", "seed", "plan_digest"}) CHECK(j.contains(key));
  for (const char* a : {"N1", "N2", "N3", "N4", "N5", "N6"}) CHECK(j["axioms"][a] == true);
  CHECK(j["seed"] == 3);
}

TEST_CASE("batch axiom checks do not depend on thread count") {
  const auto spec = FuzzyNormSpec::quadratic_ratio();
  const Json one = check_axioms_batch(spec, 2, 30, 5, Exec{1}).to_json();
  const Json four = check_axioms_batch(spec, 2, 30, 5, Exec{4}).to_json();
  CHECK(canonical_dump(one) == canonical_dump(four));
}

TEST_CASE("sample plans validate their invariants") {
  SamplePlan plan = SamplePlan::standard(2, 0);
  CHECK_NOTHROW(plan.validate());
  CHECK(plan.digest() == SamplePlan::standard(2, 0).digest());
  SamplePlan no_zero = plan;
  no_zero.points.erase(no_zero.points.begin());
  CHECK_THROWS_AS(no_zero.validate(), DomainError);
  SamplePlan positive_only = plan;
  positive_only.t_grid = {1.0, 2.0};
  CHECK_THROWS_AS(positive_only.validate(), DomainError);
}

TEST_CASE("fuzzy_limit_test examples") {
  const auto n1 = FuzzyNormSpec::crisp_induced(1.0);
  const std::vector<double> ts{1e-3, 1e-1, 1.0};
  const Sequence shrinking = [](int n) { return Point{std::pow(3.0, -n)}; };
  const auto ok = fuzzy_limit_test(shrinking, Point{0.0}, n1, ts, 0.01, 30);
  CHECK(ok.holds);
  REQUIRE(ok.witness);
  // Oracle: smallest n with 3^-n < t eps/(1-eps) at t = 1e-3.
  int expected = 0;
  while (!(oracle::crisp(1.0, std::pow(3.0, -expected), 1e-3) > 0.99)) ++expected;
  CHECK(*ok.witness == expected);

  const Sequence constant = [](int) { return Point{1.0}; };
  CHECK_FALSE(fuzzy_limit_test(constant, Point{0.0}, n1, {0.1}, 0.01, 30).holds);
  CHECK_THROWS_AS(fuzzy_limit_test(constant, Point{0.0}, n1, {}, 0.01, 30), DomainError);
  CHECK_THROWS_AS(fuzzy_limit_test(constant, Point{0.0}, n1, {1.0}, 1.0, 30), DomainError);
  CHECK_THROWS_AS(fuzzy_limit_test(constant, Point{0.0}, n1, {1.0}, 0.01, 0), DomainError);
}

TEST_CASE("fuzzy_cauchy_test examples") {
  const auto n1 = FuzzyNormSpec::crisp_induced(1.0);
  const Sequence halving = [](int n) { return Point{std::pow(2.0, -n)}; };
  CHECK(fuzzy_cauchy_test(halving, n1, 1e-3, 0.01, 40).holds);
  const Sequence alternating = [](int n) { return Point{n % 2 ? -1.0 : 1.0}; };
  CHECK_FALSE(fuzzy_cauchy_test(alternating, n1, 1e-3, 0.01, 40).holds);
  CHECK_THROWS_AS(fuzzy_cauchy_test(halving, n1, 0.0, 0.01, 40), DomainError);
  CHECK(fuzzy_cauchy_test(sequence_of({Point{1.0}, Point{1.0}, Point{1.0}}), n1, 1e-3, 0.01, 2).holds);
}

TEST_CASE("property: convergent implies Cauchy on the same parameters (monotone sequences)") {
  const auto n1 = FuzzyNormSpec::crisp_induced(1.0);
  for_all(24, 100, [&](Gen& g, int i) {
    CAPTURE(i);
    const double ratio = g.real(0.05, 0.95);
    const double start = g.wide(-2, 2);
    const double limit = g.real(-5, 5);
    const double eps = g.real(0.001, 0.5);
    const double t = std::abs(g.wide(-3, 1));
    const Sequence seq = [=](int n) { return Point{limit + start * std::pow(ratio, n)}; };
    const auto lim = fuzzy_limit_test(seq, Point{limit}, n1, {t}, eps, 60);
    if (lim.holds && *lim.witness < 60) CHECK(fuzzy_cauchy_test(seq, n1, t, eps, 60).holds);
  });
}
