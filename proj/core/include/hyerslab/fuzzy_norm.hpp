#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyerslab/parallel.hpp"
#include "hyerslab/point.hpp"
#include "hyerslab/serialize.hpp"

namespace hyerslab {

/// Truth value in [0, 1] that ||x|| <= t.
class Membership {
 public:
  explicit Membership(double v);
  double value() const noexcept { return v_; }
  friend auto operator<=>(const Membership&, const Membership&) = default;

 private:
  double v_;
};

enum class FuzzyNormKind { CrispInduced, QuadraticRatio, Indicator, Custom };

/// A concrete fuzzy norm N(x, t) on R^d built on a crisp base norm.
///
///   CrispInduced(p):  t / (t + p||x||)              for t > 0, else 0
///   QuadraticRatio:   (t^2 - ||x||^2)/(t^2 + ||x||^2) for t > ||x||, else 0
///   Indicator:        1 for t > ||x||, else 0        (not continuous in t)
///   Custom:           user-supplied evaluator
class FuzzyNormSpec {
 public:
  using Evaluator = std::function<double(const Point&, double)>;

  static FuzzyNormSpec crisp_induced(double p, BaseNorm base = BaseNorm::Euclidean);
  static FuzzyNormSpec quadratic_ratio(BaseNorm base = BaseNorm::Euclidean);
  static FuzzyNormSpec indicator(BaseNorm base = BaseNorm::Euclidean);
  static FuzzyNormSpec custom(std::string name, Evaluator eval, BaseNorm base = BaseNorm::Euclidean);

  FuzzyNormKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  BaseNorm base() const noexcept { return base_; }
  const std::string& name() const noexcept { return name_; }
  bool has_closed_form() const noexcept { return kind_ != FuzzyNormKind::Custom; }

  /// Raw membership; callers normally go through eval_norm.
  double evaluate(const Point& x, double t) const;

  Json to_json() const;
  static FuzzyNormSpec from_json(const Json& j);

 private:
  FuzzyNormKind kind_ = FuzzyNormKind::CrispInduced;
  double p_ = 1.0;
  BaseNorm base_ = BaseNorm::Euclidean;
  std::string name_;
  Evaluator custom_;
};

Membership eval_norm(const FuzzyNormSpec& spec, const Point& x, double t);

/// Smallest radius T with N(x, T) >= level, for level in (0, 1). Closed form
/// for shipped norms (all of the form h(||x|| / T)); bisection otherwise.
/// Returns +inf if no T up to 1e300 reaches the level.
double level_radius(const FuzzyNormSpec& spec, const Point& x, double level);

/// dN/dt supremum over [t_lo, t_hi] for shipped norms and a nonzero x.
double derivative_bound(const FuzzyNormSpec& spec, const Point& x, double t_lo, double t_hi);

// ---------------------------------------------------------------------------
// Axiom checking

struct SamplePlan {
  std::vector<Point> points;
  std::vector<double> t_grid;
  std::vector<double> scalars;
  std::size_t pair_count = 0;
  std::uint64_t seed = 0;

  /// Throws DomainError unless the plan carries zero, a t <= 0, a t > 0,
  /// a strictly increasing grid and only nonzero scalars.
  void validate() const;

  /// Deterministic plan: zero, +-axis vectors at several radii, a
  /// log-spaced t grid with negative and zero entries.
  static SamplePlan standard(std::size_t dim, std::uint64_t seed = 0);

  /// Randomised plan drawn from the seed.
  static SamplePlan random(std::size_t dim, std::uint64_t seed);

  Json to_json() const;
  std::string digest() const;
};

enum class Axiom { N1 = 0, N2, N3, N4, N5, N6 };
std::string to_string(Axiom a);

struct AxiomCounterexample {
  Axiom axiom = Axiom::N1;
  Point x;
  std::optional<Point> y;
  double t = 0.0;
  std::optional<double> s;
  std::optional<double> c;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct AxiomReport {
  std::array<bool, 6> holds{true, true, true, true, true, true};
  std::vector<AxiomCounterexample> counterexamples;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
  std::string plan_digest;

  bool passes(Axiom a) const { return holds[static_cast<std::size_t>(a)]; }
  bool all_pass() const;
  Json to_json() const;
};

struct AxiomTolerances {
  double identity = 1e-12;
  double tail = 1e-6;
  double tail_radius_factor = 1e6;
  /// At most this many counterexamples are recorded per axiom.
  std::size_t max_counterexamples = 4;
};

AxiomReport check_axioms(const FuzzyNormSpec& spec, const SamplePlan& plan,
                         const AxiomTolerances& tol = {});

/// Runs check_axioms over `count` random plans seeded from `seed`; the
/// returned report merges verdicts (an axiom holds iff it held in every plan).
AxiomReport check_axioms_batch(const FuzzyNormSpec& spec, std::size_t dim, std::size_t count,
                               std::uint64_t seed, Exec exec = {}, const AxiomTolerances& tol = {});

// ---------------------------------------------------------------------------
// Fuzzy sequences

using Sequence = std::function<Point(int)>;

struct SequenceVerdict {
  bool holds = false;
  /// Index from which the property holds (for every probe), if it does.
  std::optional<int> witness;
};

/// True iff for every t in t_probe some n0 <= n_max has
/// N(x_n - limit, t) > 1 - eps for all n0 <= n <= n_max.
SequenceVerdict fuzzy_limit_test(const Sequence& seq, const Point& limit, const FuzzyNormSpec& spec,
                                 const std::vector<double>& t_probe, double eps, int n_max);

/// True iff some n0 < n_max has N(x_m - x_n, delta) > 1 - eps for all
/// n0 <= m, n <= n_max (the tail must hold at least two terms).
SequenceVerdict fuzzy_cauchy_test(const Sequence& seq, const FuzzyNormSpec& spec, double delta,
                                  double eps, int n_max);

/// Sequence view over stored terms x_0..x_{k-1}.
Sequence sequence_of(std::vector<Point> terms);

}  // namespace hyerslab
