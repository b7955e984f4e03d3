#include <chrono>
#include <functional>

#include "hyerslab/rng.hpp"
#include "hyerslab_tools/experiment.hpp"

namespace hyerslab::tools {

namespace {

struct Context {
  const ExperimentConfig& cfg;
  Exec exec;
  std::string digest;
  CertifiedFunction fut;
  std::optional<ControlFunction> control;
  std::vector<Point> probes;
  TripleSample triples;

  double alpha() const { return control ? control->alpha() : 1.0; }
};

// Independent random streams per purpose, all derived from the config seed.
enum Stream : std::uint64_t { kTripleStream = 1, kProbeStream = 2, kAxiomStream = 3 };

Json envelope(const Context& ctx, int depth_used = 0, double stage_bound = 0.0) {
  return Json{{"seed", ctx.cfg.seed},
              {"config_digest", ctx.digest},
              {"depth_used", depth_used},
              {"stage_bound", stage_bound}};
}

Json with_envelope(Json suite, const Context& ctx, const ExtractionResult* ext = nullptr) {
  suite["envelope"] = ext ? envelope(ctx, ext->depth_used, ext->stage_bound) : envelope(ctx);
  return suite;
}

TestFunction checked(const TestFunction& f) { return f.meta() ? f.verifying() : f; }

const ControlFunction& require_control(const Context& ctx) {
  if (!ctx.control) throw ConfigError("control", "required: the function under test has no certified control");
  return *ctx.control;
}

Json suite_axioms(const Context& ctx) {
  std::vector<FuzzyNormSpec> norms = ctx.cfg.axioms.norms;
  if (norms.empty()) {
    norms.push_back(ctx.cfg.norm);
    if (ctx.cfg.norm_prime.to_json() != ctx.cfg.norm.to_json()) norms.push_back(ctx.cfg.norm_prime);
  }
  const std::uint64_t seed = derive_seed(ctx.cfg.seed, kAxiomStream);
  bool pass = true;
  Json rows = Json::array();
  for (const auto& n : norms) {
    const AxiomReport standard = check_axioms(n, SamplePlan::standard(ctx.cfg.dimension, seed));
    const AxiomReport batch = check_axioms_batch(n, ctx.cfg.dimension, ctx.cfg.axioms.plans, seed, ctx.exec);
    const bool ok = standard.all_pass() && batch.all_pass();
    pass = pass && ok;
    rows.push_back(Json{{"norm", n.to_json()}, {"pass", ok}, {"standard_plan", standard.to_json()},
                        {"random_plans", batch.to_json()}});
  }
  return with_envelope(Json{{"pass", pass}, {"plans", ctx.cfg.axioms.plans}, {"norms", rows}}, ctx);
}

Json suite_solution_check(const Context& ctx, const TestFunction& f) {
  const SolutionCheck sol = check_solution(f, ctx.triples, ctx.cfg.residual_tol, ctx.exec);
  const SubstitutionReport subs = substitution_suite(f, ctx.probes, ctx.cfg.residual_tol);
  return with_envelope(Json{{"pass", sol.pass && subs.all_pass()},
                            {"function", f.name()},
                            {"tol", ctx.cfg.residual_tol},
                            {"solution", sol.to_json()},
                            {"substitution", subs.to_json()}},
                       ctx);
}

Json suite_extract(const Context& ctx) {
  const TestFunction f = checked(ctx.fut.f);
  const ExtractionResult ext = extract_affine(f, ctx.probes, ctx.cfg.rule, ctx.alpha(), ctx.exec);
  Json out{{"extraction", ext.to_json()}, {"stage_bound_limit", stage_error_bound_limit(ctx.alpha())}};
  bool pass = ext.converged;
  if (ext.converged) {
    const AffineDecomposition dec = affine_decompose(approximant(f, ctx.cfg.rule), ctx.probes, ctx.cfg.residual_tol);
    out["decomposition"] = dec.to_json();
    pass = dec.is_affine();
  }
  out["pass"] = pass;
  return with_envelope(std::move(out), ctx, &ext);
}

Json suite_verify_nonuniform(const Context& ctx) {
  const ControlFunction& phi = require_control(ctx);
  const TestFunction f = checked(ctx.fut.f);
  const auto t_grid = ctx.cfg.t_grid.points();
  const HypothesisReport hyp =
      verify_hypothesis_nonuniform(f, phi, ctx.cfg.norm, ctx.cfg.norm_prime, ctx.triples, t_grid, ctx.exec);
  const ExtractionResult ext = extract_affine(f, ctx.probes, ctx.cfg.rule, phi.alpha(), ctx.exec);
  Json out{{"control", phi.to_json()}, {"alpha", phi.alpha()}, {"hypothesis", hyp.to_json()},
           {"extraction_converged", ext.converged}};
  bool pass = hyp.pass && ext.converged;
  if (ext.converged) {
    const BoundReport bound =
        verify_bound_nonuniform(f, ext, phi, ctx.cfg.norm, ctx.cfg.norm_prime, phi.alpha(), {}, t_grid);
    out["bound"] = bound.to_json();
    out["crisp_bound"] = bound.sup_bound;
    out["sup_residual"] = bound.sup_residual;
    pass = pass && bound.pass && (!bound.crisp_reduction || bound.crisp_pass);
  }
  out["pass"] = pass;
  return with_envelope(std::move(out), ctx, &ext);
}

Json suite_verify_uniform(const Context& ctx) {
  const ControlFunction& phi = require_control(ctx);
  const TestFunction f = checked(ctx.fut.f);
  const ExtractionResult ext = extract_affine(f, ctx.probes, ctx.cfg.rule, phi.alpha(), ctx.exec);
  Json out{{"control", phi.to_json()},
           {"delta", ctx.cfg.uniform.delta},
           {"level", ctx.cfg.uniform.level},
           {"extraction_converged", ext.converged}};
  bool pass = ext.converged;
  if (ext.converged) {
    const UniformBoundReport bound = verify_bound_uniform(f, ext, phi, ctx.cfg.norm, ctx.triples,
                                                          ctx.cfg.uniform.delta, ctx.cfg.uniform.level, {});
    const auto schedule = ctx.cfg.uniform.schedule.points();
    const UniformLimitReport limit =
        verify_uniform_limit(f, ext, phi, ctx.cfg.norm, schedule, default_eps_schedule(schedule.size()));
    out["bound"] = bound.to_json();
    out["uniform_limit"] = limit.to_json();
    pass = bound.pass && limit.pass;
  }
  out["pass"] = pass;
  return with_envelope(std::move(out), ctx, &ext);
}

std::optional<std::pair<double, double>> corollary_parameters(const Context& ctx) {
  const auto& c = ctx.cfg.corollary;
  if (c.eps && c.p) return std::pair{*c.eps, *c.p};
  if (ctx.control && ctx.control->kind() == ControlKind::PowerSum) {
    return std::pair{c.eps.value_or(ctx.control->coefficient()), c.p.value_or(ctx.control->exponent())};
  }
  return std::nullopt;
}

Json suite_corollary53(const Context& ctx) {
  const auto params = corollary_parameters(ctx);
  if (!params) throw ConfigError("corollary", "eps and p are required unless a power_sum control is available");
  Corollary53Options opts;
  opts.norm = ctx.cfg.norm;
  opts.triple_count = ctx.cfg.triples.count;
  opts.triple_radius = ctx.cfg.triples.radius;
  opts.seed = derive_seed(ctx.cfg.seed, kTripleStream);
  opts.hypothesis_t_grid = ctx.cfg.t_grid.points();
  opts.rule = ctx.cfg.rule;
  opts.exec = ctx.exec;
  const Corollary53Report rep = corollary53_suite(params->first, params->second, checked(ctx.fut.f), ctx.probes,
                                                  ctx.cfg.uniform.schedule.points(), opts);
  return with_envelope(rep.to_json(), ctx, &rep.extraction);
}

Json suite_uniqueness(const Context& ctx) {
  const auto& u = ctx.cfg.uniqueness;
  const CertifiedFunction second = u.second->build(ctx.cfg.dimension);
  const UniquenessReport rep =
      uniqueness_probe(checked(ctx.fut.f), checked(second.f), ctx.probes, ctx.cfg.rule, ctx.exec);
  bool pass = true;
  if (u.expect == "same") {
    pass = rep.max_discrepancy <= u.tol;
  } else {
    for (std::size_t i = 0; i < ctx.probes.size(); ++i) {
      const double r = norm(ctx.probes[i]);
      if (r > 0.0 && rep.discrepancies[i] < u.min_separation * r * (1.0 - 1e-12)) pass = false;
    }
  }
  Json out = rep.to_json();
  out["expect"] = u.expect;
  out["pass"] = pass;
  return with_envelope(std::move(out), ctx);
}

// Numerical failures inside a suite are check failures, not input errors.
Json guarded(const std::function<Json()>& suite) {
  try {
    return suite();
  } catch (const ConvergenceError& e) {
    return Json{{"pass", false}, {"error", e.what()}};
  } catch (const IterationOverflow& e) {
    return Json{{"pass", false}, {"error", e.what()}};
  } catch (const BudgetViolation& e) {
    return Json{{"pass", false}, {"error", e.what()}};
  } catch (const DivergentSeries& e) {
    return Json{{"pass", false}, {"error", e.what()}};
  }
}

}  // namespace

Json run_experiment(const ExperimentConfig& cfg, Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  Context ctx{cfg, exec, cfg.digest(), cfg.function.build(cfg.dimension), std::nullopt, {}, {}};
  ctx.control = cfg.control ? cfg.control : ctx.fut.control;
  ctx.probes = cfg.probes.points(cfg.dimension, derive_seed(cfg.seed, kProbeStream));
  ctx.triples = TripleSample::standard(cfg.dimension, cfg.triples.count, cfg.triples.radius,
                                       derive_seed(cfg.seed, kTripleStream));

  Json suites = Json::object();
  auto add = [&](Experiment e, const std::function<Json()>& fn) {
    Json s = guarded(fn);
    if (!s.contains("envelope")) s["envelope"] = envelope(ctx);
    suites[to_string(e)] = std::move(s);
  };
  auto skip = [&](Experiment e, const std::string& why) {
    suites[to_string(e)] = Json{{"skipped", why}, {"envelope", envelope(ctx)}};
  };

  switch (cfg.experiment) {
    case Experiment::Axioms: add(cfg.experiment, [&] { return suite_axioms(ctx); }); break;
    case Experiment::SolutionCheck:
      add(cfg.experiment, [&] { return suite_solution_check(ctx, ctx.fut.f); });
      break;
    case Experiment::Extract: add(cfg.experiment, [&] { return suite_extract(ctx); }); break;
    case Experiment::VerifyNonuniform: add(cfg.experiment, [&] { return suite_verify_nonuniform(ctx); }); break;
    case Experiment::VerifyUniform: add(cfg.experiment, [&] { return suite_verify_uniform(ctx); }); break;
    case Experiment::Corollary53: add(cfg.experiment, [&] { return suite_corollary53(ctx); }); break;
    case Experiment::Uniqueness: add(cfg.experiment, [&] { return suite_uniqueness(ctx); }); break;
    case Experiment::Full: {
      add(Experiment::Axioms, [&] { return suite_axioms(ctx); });
      // Characterisation runs on the exact affine core; stability suites on f.
      const TestFunction core = cfg.function.violator ? ctx.fut.f : make_affine(cfg.function.a, cfg.function.b);
      add(Experiment::SolutionCheck, [&] { return suite_solution_check(ctx, core); });
      add(Experiment::Extract, [&] { return suite_extract(ctx); });
      if (ctx.control) {
        add(Experiment::VerifyNonuniform, [&] { return suite_verify_nonuniform(ctx); });
        add(Experiment::VerifyUniform, [&] { return suite_verify_uniform(ctx); });
      } else {
        skip(Experiment::VerifyNonuniform, "no certified control");
        skip(Experiment::VerifyUniform, "no certified control");
      }
      if (corollary_parameters(ctx)) add(Experiment::Corollary53, [&] { return suite_corollary53(ctx); });
      else skip(Experiment::Corollary53, "no power_sum control");
      if (cfg.uniqueness.second) add(Experiment::Uniqueness, [&] { return suite_uniqueness(ctx); });
      else skip(Experiment::Uniqueness, "no second function");
      break;
    }
  }

  bool pass = true;
  for (const auto& item : suites.items()) {
    if (item.value().contains("pass")) pass = pass && item.value()["pass"].get<bool>();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return Json{{"tool", Json{{"name", "hyerslab"}, {"version", tool_version()}}},
              {"experiment", to_string(cfg.experiment)},
              {"config", cfg.to_json()},
              {"config_digest", ctx.digest},
              {"suites", suites},
              {"pass", pass},
              {"wall_clock", seconds}};
}

}  // namespace hyerslab::tools
