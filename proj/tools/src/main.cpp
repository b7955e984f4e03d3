#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hyerslab/serialize.hpp"
#include "hyerslab_tools/experiment.hpp"

namespace ht = hyerslab::tools;

namespace {

std::string plot_path(const std::string& out, const std::string& what) {
  if (out.empty()) return "hyerslab-" + what + ".csv";
  std::filesystem::path p(out);
  p.replace_extension();
  return p.string() + "." + what + ".csv";
}

int run(const std::string& config_path, const std::string& out, const std::string& plot, unsigned threads) {
  try {
    if (!plot.empty() && std::find(std::begin(ht::kPlotKinds), std::end(ht::kPlotKinds), plot) == std::end(ht::kPlotKinds)) {
      throw ht::ConfigError("plot", "unknown series '" + plot + "' (expected residual-vs-x, membership-vs-t or bound-tightness)");
    }
    ht::ExperimentConfig cfg = ht::load_config(config_path);
    ht::apply_seed_override(cfg, std::getenv("HYERSLAB_SEED"));
    const hyerslab::Json report = ht::run_experiment(cfg, hyerslab::Exec{threads});
    const std::string text = hyerslab::canonical_dump(report, 2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out, std::ios::binary);
      if (!f || !(f << text)) {
        std::cerr << "error: cannot write report to '" << out << "'\n";
        return ht::kExitInputError;
      }
    }
    if (!plot.empty()) {
      const std::string path = plot_path(out, plot);
      std::ofstream f(path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write plot data to '" << path << "'\n";
        return ht::kExitInputError;
      }
      ht::emit_plot_data(report, plot, f);
    }
    const bool pass = report["pass"].get<bool>();
    std::cerr << ht::to_string(cfg.experiment) << ": " << (pass ? "pass" : "FAIL") << '\n';
    return pass ? ht::kExitPass : ht::kExitCheckFailed;
  } catch (const ht::ConfigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return ht::kExitInputError;
  } catch (const hyerslab::DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return ht::kExitInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical stability checks for the affine functional equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string plot;
  unsigned threads = 1;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out, "Report path (default: stdout)");
  run_cmd->add_option("--plot", plot, "Also emit CSV for residual-vs-x, membership-vs-t or bound-tightness");
  run_cmd->add_option("--threads", threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1U, 256U));

  auto* version_cmd = app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ht::kExitInputError;
  }

  if (*version_cmd) {
    std::cout << "hyerslab " << ht::tool_version() << '\n';
    return ht::kExitPass;
  }
  return run(config_path, out, plot, threads);
}
