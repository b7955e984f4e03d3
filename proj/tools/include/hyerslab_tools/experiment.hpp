#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyerslab/hyers.hpp"
#include "hyerslab/perturb.hpp"

namespace hyerslab::tools {

std::string tool_version();

/// Malformed configuration; `field` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Experiment { Axioms, SolutionCheck, Extract, VerifyNonuniform, VerifyUniform, Corollary53, Uniqueness, Full };

std::string to_string(Experiment e);

/// The function under test: a named violator, or a x + b plus an optional
/// perturbation.
struct FunctionSpec {
  std::optional<ViolatorKind> violator;
  Matrix a = Matrix::scalar(0.0);
  Point b = Point::scalar(0.0);
  std::optional<PerturbationSpec> perturbation;

  CertifiedFunction build(std::size_t dim) const;
  Json to_json() const;
};

struct ProbeGrid {
  enum class Spacing { Linear, Geometric, Random };
  Spacing spacing = Spacing::Linear;
  std::size_t count = 41;
  double radius = 10.0;
  /// Smallest magnitude for geometric spacing.
  double min_radius = 1e-3;

  /// Linear: evenly spaced on [-radius, radius] along the diagonal.
  /// Geometric: magnitudes min_radius..radius along e1.
  /// Random: uniform in the cube, seeded.
  std::vector<Point> points(std::size_t dim, std::uint64_t seed) const;
  Json to_json() const;
};

struct TGrid {
  double t0 = 1e-3;
  int decades = 6;
  int per_decade = 40;

  std::vector<double> points() const { return geometric_t_grid(t0, decades, per_decade); }
  Json to_json() const;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Full;
  std::uint64_t seed = 0;
  std::size_t dimension = 1;
  FuzzyNormSpec norm = FuzzyNormSpec::crisp_induced(1.0);
  FuzzyNormSpec norm_prime = FuzzyNormSpec::crisp_induced(1.0);
  FunctionSpec function;
  std::optional<ControlFunction> control;
  ProbeGrid probes;
  TGrid t_grid;
  StoppingRule rule;
  double residual_tol = kDefaultResidualTol;

  struct Triples {
    std::size_t count = 2000;
    double radius = 10.0;
  } triples;

  struct Axioms {
    std::size_t plans = 100;
    /// Empty: check norm and norm_prime.
    std::vector<FuzzyNormSpec> norms;
  } axioms;

  struct Uniform {
    double delta = 2.0;
    double level = 0.5;
    TGrid schedule{1.0, 6, 4};
  } uniform;

  struct Corollary {
    std::optional<double> eps;
    std::optional<double> p;
  } corollary;

  struct Uniqueness {
    std::optional<FunctionSpec> second;
    /// "same": pass iff discrepancy <= tol; "different": pass iff the
    /// discrepancy is >= min_separation * ||x|| at every nonzero probe.
    std::string expect = "same";
    double tol = 1e-9;
    double min_separation = 0.09;
  } uniqueness;

  /// Normalized form with every default spelled out; parsing it back
  /// yields the same configuration.
  Json to_json() const;
  std::string digest() const;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Overrides cfg.seed from HYERSLAB_SEED when set. Throws ConfigError on a
/// malformed value.
void apply_seed_override(ExperimentConfig& cfg, const char* env_value);

/// Runs the configured suites. The report holds the config echo, its digest,
/// per-suite results, the overall verdict, the tool version and a
/// "wall_clock" field (the only field that differs between identical runs).
/// `exec` only affects speed.
Json run_experiment(const ExperimentConfig& cfg, Exec exec = {});

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitInputError = 2 };

inline constexpr const char* kPlotKinds[] = {"residual-vs-x", "membership-vs-t", "bound-tightness"};

/// Writes CSV for a report series: a leading '#' line documenting the
/// columns, a header row, then rows sorted by the first column. Throws
/// ConfigError("plot", ...) when the report lacks the series.
void emit_plot_data(const Json& report, const std::string& what, std::ostream& out);

}  // namespace hyerslab::tools
