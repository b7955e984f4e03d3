#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyerslab/control.hpp"
#include "hyerslab/functional_eq.hpp"
#include "hyerslab/fuzzy_norm.hpp"
#include "hyerslab/parallel.hpp"
#include "hyerslab/test_function.hpp"

namespace hyerslab {

/// Truncation of the limit A(x) = lim f(3^n x) / 3^n.
struct StoppingRule {
  int n_max = 30;
  double successive_tol = 1e-10;
  /// Abort once ||3^n x|| would exceed this.
  double argument_cap = 1e12;

  void validate() const;
  Json to_json() const;
  static StoppingRule from_json(const Json& j);
};

/// f(3^n x) / 3^n with a single evaluation of f. Throws IterationOverflow
/// (carrying the last safe n) when ||3^n x|| exceeds argument_cap.
Point hyers_iterate(const TestFunction& f, const Point& x, int n, double argument_cap = 1e12);

/// The sequence n -> g(3^n x) / 3^n for g = f - f(0).
Sequence hyers_sequence(const TestFunction& f, const Point& x, double argument_cap = 1e12);

struct ProbeValue {
  Point x;
  Point value;
  int depth = 0;
  bool converged = false;
  bool overflow = false;
};

struct ExtractionResult {
  std::vector<ProbeValue> probes;
  Point f_at_zero;
  /// Largest depth over probes.
  int depth_used = 0;
  double alpha = 1.0;
  /// stage_error_bound(alpha, depth_used).
  double stage_bound = 0.0;
  bool converged = false;
  bool overflow = false;

  const ProbeValue* find(const Point& x) const;
  Json to_json() const;
};

/// Direct-method extraction at each probe, iterating g(3^n x)/3^n until
/// successive iterates differ by at most successive_tol. Overflow and
/// n_max exhaustion leave the last iterate in place with converged = false.
/// `alpha` only feeds the reported stage bound.
ExtractionResult extract_affine(const TestFunction& f, const std::vector<Point>& probes,
                                const StoppingRule& rule = {}, double alpha = 1.0, Exec exec = {});

/// The extracted additive map as a test function, x -> L x, where the
/// columns of L are A(e_i). Throws ConvergenceError if extraction fails.
TestFunction approximant(const TestFunction& f, const StoppingRule& rule = {});

/// sum_{j<n} alpha^j / 3^(j+1), for 0 < alpha < 3 and n >= 0.
double stage_error_bound(double alpha, int n);
/// The n -> infinity limit, 1 / (3 - alpha).
double stage_error_bound_limit(double alpha);

struct PhiTilde {
  double value = 0.0;
  /// Number of series terms summed.
  int terms = 0;
  /// Certified bound on the neglected tail.
  double remainder_bound = 0.0;
  bool certified = false;
};

/// Partial sum of sum_n 3^-n phi(3^n x, 3^n y, 3^n z) over the first `terms`
/// terms, with tail bound term_last * r / (1 - r), r = alpha / 3.
PhiTilde phi_tilde_partial(const ControlFunction& phi, const Point& x, const Point& y, const Point& z, int terms);

/// The series summed until the certified tail drops below tail_tol.
/// Throws DivergentSeries when alpha >= 3.
PhiTilde phi_tilde(const ControlFunction& phi, const Point& x, const Point& y, const Point& z,
                   double tail_tol = 1e-12);

/// Closed form of phi~(0, 0, x): 3c/2 for Constant(c), and
/// eps |x|^p 3^(1-p) / (3^(1-p) - 1) for PowerSum(eps, p).
double phi_tilde_on_axis_closed_form(const ControlFunction& phi, const Point& x);

/// Geometric grid t0 * 10^(k / per_decade), k < decades * per_decade.
std::vector<double> geometric_t_grid(double t0, int decades = 6, int per_decade = 40);

// ---------------------------------------------------------------------------
// Verifiers

struct HypothesisReport {
  bool pass = false;
  /// min over samples of N(Df, t) - N'(phi, t).
  double worst_margin = 1.0;
  std::optional<Triple> worst_triple;
  double worst_t = 0.0;
  std::size_t samples = 0;
  /// sup ||Df|| / phi over triples with phi > 0 (the crisp reading).
  double max_defect_ratio = 0.0;
  bool alpha_in_range = true;
  /// phi(3x,0,0) = alpha phi(x,0,0) (exact for shipped controls) and the
  /// N' comparison form of the same statement.
  bool scaling_pass = true;
  double scaling_max_violation = 0.0;
  /// 1 - N'(phi(3^n x, 3^n y, 3^n z), 3^n t) is nonincreasing over n <= 30
  /// at the smallest grid t (custom controls: and shrinks by 1e3).
  bool decay_pass = true;

  Json to_json() const;
};

/// Checks N(Df(x,y,z), t) >= N'(phi(x,y,z), t) on every (triple, t).
HypothesisReport verify_hypothesis_nonuniform(const TestFunction& f, const ControlFunction& phi,
                                              const FuzzyNormSpec& n, const FuzzyNormSpec& n_prime,
                                              const TripleSample& triples, const std::vector<double>& t_grid,
                                              Exec exec = {});

struct ProbeBound {
  Point x;
  double residual = 0.0;
  /// Crisp reading of the bound: phi(x,0,0) / (3 - alpha).
  double bound = 0.0;
  double min_margin = 1.0;
};

struct BoundReport {
  bool pass = false;
  double worst_margin = 1.0;
  std::optional<Point> worst_probe;
  double worst_t = 0.0;
  double sup_residual = 0.0;
  double sup_bound = 0.0;
  /// True when N and N' are the same CrispInduced norm, in which case the
  /// fuzzy inequality is equivalent to residual <= bound.
  bool crisp_reduction = false;
  bool crisp_pass = false;
  std::vector<ProbeBound> probes;

  Json to_json() const;
};

/// Checks N(f(x) - A(x) - f(0), t) >= N'(phi(x,0,0), (3 - alpha) t) at every
/// probe and t. Empty `probes` means every extracted probe.
BoundReport verify_bound_nonuniform(const TestFunction& f, const ExtractionResult& ext, const ControlFunction& phi,
                                    const FuzzyNormSpec& n, const FuzzyNormSpec& n_prime, double alpha,
                                    const std::vector<Point>& probes, const std::vector<double>& t_grid);

struct UniformBoundReport {
  bool pass = false;
  bool hypothesis_pass = false;
  double hypothesis_min_membership = 1.0;
  std::optional<Triple> hypothesis_witness;
  /// Triples with phi = 0 and Df = 0, where N(0, 0) = 0 makes the strict
  /// inequality unsatisfiable; they are skipped.
  std::size_t hypothesis_vacuous = 0;
  bool conclusion_pass = false;
  double conclusion_min_membership = 1.0;
  std::optional<Point> conclusion_witness;
  std::size_t conclusion_vacuous = 0;

  Json to_json() const;
};

/// Checks N(Df, delta phi) > level on the triples, then
/// N(f(x) - A(x) - f(0), (delta/3) phi~(0,0,x)) > level at the probes.
UniformBoundReport verify_bound_uniform(const TestFunction& f, const ExtractionResult& ext,
                                        const ControlFunction& phi, const FuzzyNormSpec& n,
                                        const TripleSample& triples, double delta, double level,
                                        const std::vector<Point>& probes);

struct UniformFinding {
  std::string kind;
  Point x;
  std::string detail;
};

struct MembershipRow {
  double t;
  double membership;
  double threshold;
};

struct UniformLimitReport {
  bool pass = false;
  /// sup ||f(x) - A(x) - f(0)|| / phi~(0,0,x) over probes with phi~ > 0.
  double sup_ratio = 0.0;
  std::optional<Point> worst_probe;
  std::size_t excluded = 0;
  /// Smallest t after which membership >= 1 - eps at every probe, per eps.
  std::vector<double> thresholds;
  std::vector<double> t_schedule;
  std::vector<double> eps_schedule;
  std::vector<UniformFinding> findings;
  /// Membership against t at the worst probe.
  std::vector<MembershipRow> membership_curve;
  struct ProbeRatio {
    Point x;
    double residual;
    double phi_tilde;
  };
  std::vector<ProbeRatio> probes;

  Json to_json() const;
};

/// Operationalises lim_t N(f(x) - A(x) - f(0), t phi~(0,0,x)) = 1 uniformly
/// on the probe set: records the sup ratio, derives the per-eps threshold,
/// and reports a uniformity violation if the threshold for the final eps
/// lies beyond the schedule or phi~ vanishes where the residual does not.
UniformLimitReport verify_uniform_limit(const TestFunction& f, const ExtractionResult& ext,
                                        const ControlFunction& phi, const FuzzyNormSpec& n,
                                        const std::vector<double>& t_schedule,
                                        const std::vector<double>& eps_schedule);

/// Default pairing for verify_uniform_limit: eps decreasing geometrically
/// from 0.5 to 1e-3 along the schedule.
std::vector<double> default_eps_schedule(std::size_t size);

struct UniquenessReport {
  double max_discrepancy = 0.0;
  std::optional<Point> worst_probe;
  std::vector<double> discrepancies;

  Json to_json() const;
};

/// Extracts A1 and A2 from f1 and f2 and returns sup ||A1(x) - A2(x)||.
/// Throws ConvergenceError if either extraction fails to converge.
UniquenessReport uniqueness_probe(const TestFunction& f1, const TestFunction& f2, const std::vector<Point>& probes,
                                  const StoppingRule& rule = {}, Exec exec = {});

struct Corollary53Options {
  FuzzyNormSpec norm = FuzzyNormSpec::crisp_induced(1.0);
  std::size_t triple_count = 10000;
  double triple_radius = 10.0;
  std::uint64_t seed = 0;
  std::vector<double> hypothesis_t_grid = geometric_t_grid(1e-3);
  std::vector<double> eps_schedule;  // empty: default_eps_schedule
  StoppingRule rule;
  Exec exec;
};

struct Corollary53Report {
  bool pass = false;
  double eps = 0.0;
  double p = 0.0;
  /// 3^(1-p) / (3^(1-p) - 1).
  double factor = 0.0;
  /// Whether eps >= eps' (3^(p+1) + 9) for the declared growth profile.
  std::optional<bool> certificate_ok;
  double closed_form_max_rel_diff = 0.0;
  HypothesisReport hypothesis;
  ExtractionResult extraction;
  UniformLimitReport limit;

  Json to_json() const;
};

/// Runs the hypothesis check with PowerSum(eps, p), extraction, and the
/// uniform-limit check with phi~(0,0,x) = eps |x|^p 3^(1-p) / (3^(1-p) - 1).
Corollary53Report corollary53_suite(double eps, double p, const TestFunction& f, const std::vector<Point>& probes,
                                    const std::vector<double>& t_schedule, const Corollary53Options& opts = {});

}  // namespace hyerslab
