#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hyerslab_tools/experiment.hpp"

using namespace hyerslab;
using namespace hyerslab::tools;

namespace {

const std::string kConfigs = HYERSLAB_SOURCE_DIR "/configs/";

Json minimal() {
  return Json::parse(R"({
    "experiment": "verify-nonuniform",
    "seed": 11,
    "function": {"a": [[2]], "b": [1],
                 "perturbation": {"family": "sine_bounded", "amplitude": 0.1, "frequency": 1}},
    "control": {"kind": "constant", "c": 1.2},
    "probes": {"count": 21}
  })");
}

std::string field_of(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

Json without_clock(Json report) {
  report.erase("wall_clock");
  return report;
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + HYERSLAB_CLI_PATH + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("config parsing and field-named errors") {
  const auto cfg = parse_config(minimal());
  CHECK(cfg.experiment == Experiment::VerifyNonuniform);
  CHECK(cfg.seed == 11);
  CHECK(cfg.probes.count == 21);
  REQUIRE(cfg.control);
  CHECK(cfg.control->coefficient() == 1.2);

  Json j = minimal();
  j.erase("seed");
  CHECK(field_of(j) == "seed");

  j = minimal();
  j["colour"] = "blue";
  CHECK(field_of(j) == "colour");

  j = minimal();
  j["probes"]["count"] = -3;
  CHECK(field_of(j) == "probes.count");

  j = minimal();
  j["norm"] = Json{{"kind", "crisp_induced"}, {"p", 0}};
  CHECK(field_of(j).rfind("norm", 0) == 0);

  j = minimal();
  j["function"]["violator"] = "quadratic";
  CHECK(field_of(j).rfind("function", 0) == 0);

  j = minimal();
  j["experiment"] = "everything";
  CHECK(field_of(j) == "experiment");

  CHECK_THROWS_AS(load_config(kConfigs + "does-not-exist.json"), ConfigError);
}

TEST_CASE("config echo round trips losslessly") {
  for (const char* name : {"example_full.json", "axioms_crisp.json", "violator_quadratic.json",
                           "verify_nonuniform.json", "power_growth_uniform.json", "constant_offset_mismatch.json"}) {
    CAPTURE(name);
    const auto cfg = load_config(kConfigs + name);
    const Json echo = cfg.to_json();
    const auto back = parse_config(echo);
    CHECK(canonical_dump(back.to_json()) == canonical_dump(echo));
    CHECK(back.digest() == cfg.digest());
  }
}

TEST_CASE("seed override") {
  auto cfg = parse_config(minimal());
  const auto before = cfg.digest();
  apply_seed_override(cfg, nullptr);
  CHECK(cfg.seed == 11);
  apply_seed_override(cfg, "99");
  CHECK(cfg.seed == 99);
  CHECK(cfg.digest() != before);
  CHECK_THROWS_AS(apply_seed_override(cfg, "-1"), ConfigError);
  CHECK_THROWS_AS(apply_seed_override(cfg, "12abc"), ConfigError);
  CHECK_THROWS_AS(apply_seed_override(cfg, ""), ConfigError);
}

TEST_CASE("verify-nonuniform run reports the crisp bound") {
  const Json report = run_experiment(load_config(kConfigs + "verify_nonuniform.json"));
  CHECK(report["pass"] == true);
  const Json& suite = report["suites"]["verify-nonuniform"];
  CHECK(suite["crisp_bound"].get<double>() == doctest::Approx(0.6));
  CHECK(suite["sup_residual"].get<double>() <= 0.1);
  CHECK(suite["envelope"]["seed"] == 11);
  CHECK(report["config_digest"] == load_config(kConfigs + "verify_nonuniform.json").digest());
  CHECK(report["tool"]["version"] == tool_version());
}

TEST_CASE("solution-check on the quadratic violator fails at (1,0,0)") {
  const Json report = run_experiment(load_config(kConfigs + "violator_quadratic.json"));
  CHECK(report["pass"] == false);
  const Json& sol = report["suites"]["solution-check"]["solution"];
  CHECK(sol["pass"] == false);
  CHECK(sol["witness"] == Json::parse("[[1.0],[0.0],[0.0]]"));
  CHECK(sol["witness_residual"].get<double>() == 6.0);
}

TEST_CASE("plot data") {
  const Json report = run_experiment(load_config(kConfigs + "verify_nonuniform.json"));
  std::ostringstream out;
  emit_plot_data(report, "residual-vs-x", out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(in, line);
  CHECK(line == "x,residual,bound");
  double prev = -std::numeric_limits<double>::infinity();
  int rows = 0;
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(0, line.find(',')));
    CHECK(x >= prev);
    prev = x;
    ++rows;
  }
  CHECK(rows == 201);

  Json empty = report;
  empty["suites"]["verify-nonuniform"]["bound"]["probes"] = Json::array();
  std::ostringstream header_only;
  emit_plot_data(empty, "bound-tightness", header_only);
  const std::string text = header_only.str();
  CHECK(text.find("x,tightness,min_margin\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  std::ostringstream sink;
  CHECK_THROWS_AS(emit_plot_data(report, "membership-vs-t", sink), ConfigError);
  CHECK_THROWS_AS(emit_plot_data(report, "nonsense", sink), ConfigError);
}

TEST_CASE("reports do not depend on thread count") {
  const auto cfg = load_config(kConfigs + "example_full.json");
  const Json one = without_clock(run_experiment(cfg, Exec{1}));
  const Json four = without_clock(run_experiment(cfg, Exec{4}));
  CHECK(canonical_dump(one) == canonical_dump(four));
}

TEST_CASE("binary exit codes") {
  CHECK(run_cli("version") == kExitPass);
  CHECK(run_cli("run --config " + kConfigs + "verify_nonuniform.json --out /tmp/hyerslab-cli-test.json") ==
        kExitPass);
  CHECK(run_cli("run --config " + kConfigs + "violator_quadratic.json --out /tmp/hyerslab-cli-test.json") ==
        kExitCheckFailed);
  CHECK(run_cli("run --config " + kConfigs + "does-not-exist.json") == kExitInputError);
  CHECK(run_cli("run --config " + kConfigs + "verify_nonuniform.json --plot nonsense") == kExitInputError);
  CHECK(run_cli("run --config " + kConfigs + "verify_nonuniform.json --out /tmp/hyerslab-cli-test.json",
                "HYERSLAB_SEED=abc") == kExitInputError);
}
