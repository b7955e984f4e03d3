#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "hyerslab/rng.hpp"
#include "hyerslab_tools/experiment.hpp"

namespace hyerslab::tools {

namespace {

// Typed access to one JSON object with dotted-path diagnostics; unknown
// keys are rejected by done().
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError(at(key), "must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "must be an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "must be a string");
    return v.get<std::string>();
  }

  void done() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs a core parser and re-labels its DomainError with the field path.
template <class Fn>
auto wrap(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

Experiment experiment_from_string(const std::string& s) {
  for (auto e : {Experiment::Axioms, Experiment::SolutionCheck, Experiment::Extract, Experiment::VerifyNonuniform,
                 Experiment::VerifyUniform, Experiment::Corollary53, Experiment::Uniqueness, Experiment::Full}) {
    if (to_string(e) == s) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

std::string to_string(ProbeGrid::Spacing s) {
  switch (s) {
    case ProbeGrid::Spacing::Linear: return "linear";
    case ProbeGrid::Spacing::Geometric: return "geometric";
    case ProbeGrid::Spacing::Random: return "random";
  }
  return "linear";
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return Matrix::scalar(j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError(field, "must be a number or a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (rows > kMaxDim || cols == 0 || cols > kMaxDim) throw ConfigError(field, "rows and columns must be 1..3");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError(field, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ConfigError(field, "entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  if (!m.is_finite()) throw ConfigError(field, "entries must be finite");
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

FunctionSpec function_from_json(const Json& j, const std::string& path, std::size_t dim) {
  Reader r(j, path);
  FunctionSpec f;
  if (r.has("violator")) {
    const std::string name = r.string("violator", "");
    f.violator = wrap(r.at("violator"), [&] { return violator_from_string(name); });
  }
  if (r.has("a")) f.a = matrix_from_json(r.raw("a"), r.at("a"));
  else f.a = Matrix(1, dim);
  if (r.has("b")) f.b = wrap(r.at("b"), [&] { return point_from_json(r.raw("b")); });
  else f.b = Point::zero(f.a.rows());
  if (r.has("perturbation")) {
    f.perturbation = wrap(r.at("perturbation"), [&] { return PerturbationSpec::from_json(r.raw("perturbation")); });
  }
  r.done();
  if (f.violator && (r.has("a") || r.has("b") || f.perturbation)) {
    throw ConfigError(r.at("violator"), "a violator cannot be combined with a, b or perturbation");
  }
  if (!f.violator) {
    if (f.a.cols() != dim) throw ConfigError(r.at("a"), "column count must equal the dimension");
    if (f.b.dim() != f.a.rows()) throw ConfigError(r.at("b"), "length must equal the row count of a");
    if (!f.b.is_finite()) throw ConfigError(r.at("b"), "entries must be finite");
  }
  return f;
}

TGrid tgrid_from_json(const Json& j, const std::string& path, TGrid g) {
  Reader r(j, path);
  g.t0 = r.number("t0", g.t0);
  g.decades = r.integer("decades", g.decades);
  g.per_decade = r.integer("per_decade", g.per_decade);
  r.done();
  if (!(g.t0 > 0.0)) throw ConfigError(r.at("t0"), "must be positive");
  if (g.decades < 1) throw ConfigError(r.at("decades"), "must be >= 1");
  if (g.per_decade < 1) throw ConfigError(r.at("per_decade"), "must be >= 1");
  return g;
}

std::uint64_t parse_seed_string(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("HYERSLAB_SEED", "must be a nonnegative decimal integer, got '" + s + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno == ERANGE) throw ConfigError("HYERSLAB_SEED", "out of range");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string tool_version() { return HYERSLAB_VERSION; }

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Axioms: return "axioms";
    case Experiment::SolutionCheck: return "solution-check";
    case Experiment::Extract: return "extract";
    case Experiment::VerifyNonuniform: return "verify-nonuniform";
    case Experiment::VerifyUniform: return "verify-uniform";
    case Experiment::Corollary53: return "corollary53";
    case Experiment::Uniqueness: return "uniqueness";
    case Experiment::Full: return "full";
  }
  return "full";
}

CertifiedFunction FunctionSpec::build(std::size_t dim) const {
  if (violator) return {make_violator(*violator, dim), std::nullopt};
  if (perturbation) return make_perturbed_affine(a, b, *perturbation);
  return {make_affine(a, b), ControlFunction::constant(0.0)};
}

Json FunctionSpec::to_json() const {
  if (violator) return Json{{"violator", hyerslab::to_string(*violator)}};
  Json j{{"a", matrix_to_json(a)}, {"b", hyerslab::to_json(b)}};
  if (perturbation) j["perturbation"] = perturbation->to_json();
  return j;
}

std::vector<Point> ProbeGrid::points(std::size_t dim, std::uint64_t seed) const {
  std::vector<Point> out;
  out.reserve(count);
  switch (spacing) {
    case Spacing::Linear: {
      Point u(dim);
      for (std::size_t i = 0; i < dim; ++i) u[i] = 1.0 / std::sqrt(static_cast<double>(dim));
      for (std::size_t k = 0; k < count; ++k) {
        const double s = count == 1 ? 0.0 : -radius + 2.0 * radius * static_cast<double>(k) / static_cast<double>(count - 1);
        out.push_back(s * u);
      }
      break;
    }
    case Spacing::Geometric: {
      const Point e = Point::unit(dim, 0);
      for (std::size_t k = 0; k < count; ++k) {
        const double f = count == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        out.push_back(min_radius * std::pow(radius / min_radius, f) * e);
      }
      break;
    }
    case Spacing::Random: {
      Rng rng(seed);
      for (std::size_t k = 0; k < count; ++k) out.push_back(rng.in_cube(dim, radius));
      break;
    }
  }
  return out;
}

Json ProbeGrid::to_json() const {
  Json j{{"spacing", to_string(spacing)}, {"count", count}, {"radius", radius}};
  if (spacing == Spacing::Geometric) j["min_radius"] = min_radius;
  return j;
}

Json TGrid::to_json() const { return Json{{"t0", t0}, {"decades", decades}, {"per_decade", per_decade}}; }

Json ExperimentConfig::to_json() const {
  Json axiom_norms = Json::array();
  for (const auto& n : axioms.norms) axiom_norms.push_back(n.to_json());
  Json cor = Json::object();
  if (corollary.eps) cor["eps"] = *corollary.eps;
  if (corollary.p) cor["p"] = *corollary.p;
  Json uniq{{"expect", uniqueness.expect}, {"tol", uniqueness.tol}, {"min_separation", uniqueness.min_separation}};
  if (uniqueness.second) uniq["second"] = uniqueness.second->to_json();

  Json j{{"experiment", tools::to_string(experiment)},
         {"seed", seed},
         {"dimension", dimension},
         {"norm", norm.to_json()},
         {"norm_prime", norm_prime.to_json()},
         {"function", function.to_json()},
         {"probes", probes.to_json()},
         {"t_grid", t_grid.to_json()},
         {"stopping_rule", rule.to_json()},
         {"tolerances", Json{{"residual", residual_tol}}},
         {"triples", Json{{"count", triples.count}, {"radius", triples.radius}}},
         {"axioms", Json{{"plans", axioms.plans}, {"norms", axiom_norms}}},
         {"uniform", Json{{"delta", uniform.delta}, {"level", uniform.level}, {"schedule", uniform.schedule.to_json()}}},
         {"corollary", cor},
         {"uniqueness", uniq}};
  if (control) j["control"] = control->to_json();
  return j;
}

std::string ExperimentConfig::digest() const { return content_digest(to_json()); }

ExperimentConfig parse_config(const Json& j) {
  Reader r(j, "");
  ExperimentConfig cfg;
  if (!r.has("experiment")) throw ConfigError("experiment", "missing");
  cfg.experiment = experiment_from_string(r.string("experiment", ""));
  if (!r.has("seed")) throw ConfigError("seed", "missing (reports must be reproducible)");
  cfg.seed = r.unsigned_int("seed", 0);

  const std::uint64_t dim = r.unsigned_int("dimension", 1);
  if (dim < 1 || dim > kMaxDim) throw ConfigError("dimension", "must be 1, 2 or 3");
  cfg.dimension = static_cast<std::size_t>(dim);

  if (r.has("norm")) cfg.norm = wrap("norm", [&] { return FuzzyNormSpec::from_json(r.raw("norm")); });
  cfg.norm_prime = cfg.norm;
  if (r.has("norm_prime")) {
    cfg.norm_prime = wrap("norm_prime", [&] { return FuzzyNormSpec::from_json(r.raw("norm_prime")); });
  }

  if (r.has("function")) cfg.function = function_from_json(r.raw("function"), "function", cfg.dimension);
  else cfg.function = function_from_json(Json::object(), "function", cfg.dimension);

  if (r.has("control")) cfg.control = wrap("control", [&] { return ControlFunction::from_json(r.raw("control")); });

  if (r.has("probes")) {
    Reader p(r.raw("probes"), "probes");
    const std::string spacing = p.string("spacing", "linear");
    if (spacing == "linear") cfg.probes.spacing = ProbeGrid::Spacing::Linear;
    else if (spacing == "geometric") cfg.probes.spacing = ProbeGrid::Spacing::Geometric;
    else if (spacing == "random") cfg.probes.spacing = ProbeGrid::Spacing::Random;
    else throw ConfigError("probes.spacing", "must be linear, geometric or random");
    cfg.probes.count = p.unsigned_int("count", cfg.probes.count);
    cfg.probes.radius = p.number("radius", cfg.probes.radius);
    cfg.probes.min_radius = p.number("min_radius", cfg.probes.min_radius);
    p.done();
    if (cfg.probes.count < 1) throw ConfigError("probes.count", "must be >= 1");
    if (!(cfg.probes.radius > 0.0)) throw ConfigError("probes.radius", "must be positive");
    if (!(cfg.probes.min_radius > 0.0 && cfg.probes.min_radius <= cfg.probes.radius)) {
      throw ConfigError("probes.min_radius", "must lie in (0, radius]");
    }
  }

  if (r.has("t_grid")) cfg.t_grid = tgrid_from_json(r.raw("t_grid"), "t_grid", cfg.t_grid);
  if (r.has("stopping_rule")) {
    cfg.rule = wrap("stopping_rule", [&] { return StoppingRule::from_json(r.raw("stopping_rule")); });
  }

  if (r.has("tolerances")) {
    Reader t(r.raw("tolerances"), "tolerances");
    cfg.residual_tol = t.number("residual", cfg.residual_tol);
    t.done();
    if (!(cfg.residual_tol > 0.0)) throw ConfigError("tolerances.residual", "must be positive");
  }

  if (r.has("triples")) {
    Reader t(r.raw("triples"), "triples");
    cfg.triples.count = t.unsigned_int("count", cfg.triples.count);
    cfg.triples.radius = t.number("radius", cfg.triples.radius);
    t.done();
    if (!(cfg.triples.radius > 0.0)) throw ConfigError("triples.radius", "must be positive");
  }

  if (r.has("axioms")) {
    Reader a(r.raw("axioms"), "axioms");
    cfg.axioms.plans = a.unsigned_int("plans", cfg.axioms.plans);
    if (a.has("norms")) {
      const Json& list = a.raw("norms");
      if (!list.is_array()) throw ConfigError("axioms.norms", "must be an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string field = "axioms.norms[" + std::to_string(i) + "]";
        cfg.axioms.norms.push_back(wrap(field, [&] { return FuzzyNormSpec::from_json(list[i]); }));
      }
    }
    a.done();
    if (cfg.axioms.plans < 1) throw ConfigError("axioms.plans", "must be >= 1");
  }

  if (r.has("uniform")) {
    Reader u(r.raw("uniform"), "uniform");
    cfg.uniform.delta = u.number("delta", cfg.uniform.delta);
    cfg.uniform.level = u.number("level", cfg.uniform.level);
    if (u.has("schedule")) cfg.uniform.schedule = tgrid_from_json(u.raw("schedule"), "uniform.schedule", cfg.uniform.schedule);
    u.done();
    if (!(cfg.uniform.delta > 0.0)) throw ConfigError("uniform.delta", "must be positive");
    if (!(cfg.uniform.level > 0.0 && cfg.uniform.level <= 1.0)) throw ConfigError("uniform.level", "must lie in (0, 1]");
  }

  if (r.has("corollary")) {
    Reader c(r.raw("corollary"), "corollary");
    cfg.corollary.eps = c.optional_number("eps");
    cfg.corollary.p = c.optional_number("p");
    c.done();
    if (cfg.corollary.eps && !(*cfg.corollary.eps >= 0.0)) throw ConfigError("corollary.eps", "must be >= 0");
    if (cfg.corollary.p && !(*cfg.corollary.p >= 0.0 && *cfg.corollary.p < 1.0)) {
      throw ConfigError("corollary.p", "must lie in [0, 1)");
    }
  }

  if (r.has("uniqueness")) {
    Reader u(r.raw("uniqueness"), "uniqueness");
    if (u.has("second")) cfg.uniqueness.second = function_from_json(u.raw("second"), "uniqueness.second", cfg.dimension);
    cfg.uniqueness.expect = u.string("expect", cfg.uniqueness.expect);
    cfg.uniqueness.tol = u.number("tol", cfg.uniqueness.tol);
    cfg.uniqueness.min_separation = u.number("min_separation", cfg.uniqueness.min_separation);
    u.done();
    if (cfg.uniqueness.expect != "same" && cfg.uniqueness.expect != "different") {
      throw ConfigError("uniqueness.expect", "must be 'same' or 'different'");
    }
    if (!(cfg.uniqueness.tol > 0.0)) throw ConfigError("uniqueness.tol", "must be positive");
  }
  r.done();

  // Cross-field requirements of the selected experiment.
  const bool needs_control = cfg.experiment == Experiment::VerifyNonuniform ||
                             cfg.experiment == Experiment::VerifyUniform || cfg.experiment == Experiment::Corollary53;
  if (needs_control && !cfg.control && cfg.function.violator) {
    throw ConfigError("control", "required: a violator carries no certified control");
  }
  if (needs_control && !cfg.control && cfg.function.perturbation &&
      cfg.function.perturbation->family == PerturbationFamily::Violator) {
    throw ConfigError("control", "required: the violator family carries no certified control");
  }
  if (cfg.experiment == Experiment::Uniqueness && !cfg.uniqueness.second) {
    throw ConfigError("uniqueness.second", "required for the uniqueness experiment");
  }
  if (cfg.experiment == Experiment::Corollary53) {
    const bool from_control = cfg.control && cfg.control->kind() == ControlKind::PowerSum;
    const bool from_growth = cfg.function.perturbation &&
                             cfg.function.perturbation->family == PerturbationFamily::PowerGrowth;
    if (!(cfg.corollary.eps && cfg.corollary.p) && !from_control && !from_growth) {
      throw ConfigError("corollary", "eps and p are required unless a power_sum control is available");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

void apply_seed_override(ExperimentConfig& cfg, const char* env_value) {
  if (env_value == nullptr) return;
  cfg.seed = parse_seed_string(env_value);
}

}  // namespace hyerslab::tools
