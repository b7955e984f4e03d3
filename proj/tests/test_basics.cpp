#include <atomic>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "hyerslab/errors.hpp"
#include "hyerslab/parallel.hpp"
#include "hyerslab/point.hpp"
#include "hyerslab/rng.hpp"
#include "hyerslab/serialize.hpp"
#include "support.hpp"

using namespace hyerslab;

TEST_CASE("point arithmetic and dimension checks") {
  const Point a{1.0, 2.0};
  const Point b{3.0, -1.0};
  CHECK(a + b == Point{4.0, 1.0});
  CHECK(a - b == Point{-2.0, 3.0});
  CHECK(2.0 * a == Point{2.0, 4.0});
  CHECK(b / 2.0 == Point{1.5, -0.5});
  CHECK(-a == Point{-1.0, -2.0});
  CHECK_THROWS_AS(a + Point{1.0}, DomainError);
  CHECK(Point::unit(3, 2) == Point{0.0, 0.0, 1.0});
  CHECK(Point::zero(2).is_zero());
  CHECK_FALSE(Point{std::nan("")}.is_finite());
}

TEST_CASE("base norms match reference formulas") {
  for_all(11, 200, [](Gen& g, int i) {
    CAPTURE(i);
    const auto d = g.dim();
    const Point x = g.point(d, 100.0);
    std::vector<long double> v(x.coords().begin(), x.coords().end());
    long double l1 = 0, linf = 0;
    for (auto c : v) {
      l1 += std::fabs(c);
      linf = std::max(linf, std::fabs(c));
    }
    CHECK(norm(x) == doctest::Approx(static_cast<double>(oracle::euclid(v))).epsilon(1e-14));
    CHECK(norm(x, BaseNorm::Manhattan) == doctest::Approx(static_cast<double>(l1)).epsilon(1e-14));
    CHECK(norm(x, BaseNorm::Max) == static_cast<double>(linf));
  });
}

TEST_CASE("norm_pow uses 0^p = 0, including p = 0") {
  CHECK(norm_pow(Point{0.0}, 0.0) == 0.0);
  CHECK(norm_pow(Point{0.0}, 0.5) == 0.0);
  CHECK(norm_pow(Point{4.0}, 0.5) == doctest::Approx(2.0));
  CHECK(norm_pow(Point{-4.0}, 0.0) == 1.0);
}

TEST_CASE("matrix times point") {
  const Matrix a{{1.0, 2.0}, {0.0, -1.0}, {3.0, 0.5}};
  CHECK(a * Point{1.0, 2.0} == Point{5.0, -2.0, 4.0});
  CHECK(Matrix::identity(2) * Point{1.0, -1.0} == Point{1.0, -1.0});
  CHECK_THROWS_AS(a * Point{1.0}, DomainError);
}

TEST_CASE("rng streams are reproducible and within range") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double u = a.unit();
    CHECK(u == b.unit());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    differs = differs || u != c.unit();
  }
  CHECK(differs);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 100; ++s) seeds.insert(derive_seed(7, s));
  CHECK(seeds.size() == 100);
}

TEST_CASE("canonical dump sorts keys and keeps 17 significant digits") {
  const Json j{{"b", 0.1}, {"a", 1}, {"c", Json{{"z", 2.0}, {"y", nullptr}}}};
  CHECK(canonical_dump(j) == R"({"a":1,"b":0.10000000000000001,"c":{"y":null,"z":2.0}})");
  CHECK(canonical_dump(Json(std::numeric_limits<double>::infinity())) == "null");
  CHECK(content_digest(j) == content_digest(Json::parse(canonical_dump(j))));
}

TEST_CASE("sha256 matches the standard test vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("point json round trip") {
  const Point x{0.1, -2.5, 1e-300};
  CHECK(point_from_json(to_json(x)) == x);
  CHECK(point_from_json(Json(3.0)) == Point{3.0});
  CHECK_THROWS_AS(point_from_json(Json("x")), DomainError);
}

TEST_CASE("parallel_for fills every slot and rethrows") {
  for (unsigned threads : {1U, 2U, 7U}) {
    std::vector<int> out(1000, -1);
    parallel_for(out.size(), Exec{threads}, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 97));
  }
  CHECK_THROWS_AS(parallel_for(10, Exec{3}, [](std::size_t i) {
                    if (i == 5) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
