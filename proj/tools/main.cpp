#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "epsim/harness/checks.hpp"
#include "epsim/harness/config.hpp"
#include "epsim/harness/experiments.hpp"
#include "epsim/harness/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantFailure = 2;

std::vector<epsim::harness::ExperimentConfig> resolve(const std::string& target) {
  using namespace epsim::harness;
  if (std::filesystem::is_regular_file(target)) return load_config_file(target);
  if (auto builtin = find_builtin(target)) return {*builtin};
  if (target == "all") return builtin_experiments();
  std::string names;
  for (const auto& n : builtin_names()) names += " " + n;
  throw ConfigError("target", "'" + target + "' is neither a config file nor a built-in experiment; valid names:" +
                                  names + " all");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace epsim::harness;
  CLI::App app{"Entanglement purification protocol simulator"};
  app.require_subcommand(1);

  std::string target;
  std::string out_dir = "results";
  auto* run_cmd = app.add_subcommand("run", "run a config file or built-in experiment ('all' runs the catalog)");
  run_cmd->add_option("target", target, "config path or experiment name")->required();
  run_cmd->add_option("--out", out_dir, "output directory");

  auto* list_cmd = app.add_subcommand("list", "list built-in experiments");

  std::string filter;
  auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
  check_cmd->add_option("--filter", filter, "only checks whose name contains this text");

  std::string dump_target;
  auto* show_cmd = app.add_subcommand("show", "print the canonical config of an experiment or file");
  show_cmd->add_option("target", dump_target, "config path or experiment name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*list_cmd) {
      std::cout << catalog();
      return kOk;
    }
    if (*show_cmd) {
      std::cout << serialize(resolve(dump_target));
      return kOk;
    }
    if (*check_cmd) {
      const auto results = run_checks(filter);
      std::cout << format_report(results);
      if (results.empty()) {
        std::cerr << "no check matches '" << filter << "'\n";
        return kConfigError;
      }
      for (const auto& r : results) {
        if (!r.passed) return kInvariantFailure;
      }
      return kOk;
    }
    RunOptions options;
    options.out_dir = out_dir;
    const RunReport report = run(resolve(target), options);
    for (const auto& e : report.experiments) {
      std::cout << e.name << " (" << e.wall_seconds << " s):";
      for (const auto& f : e.files) std::cout << " " << f;
      std::cout << "\n";
    }
    std::cout << "manifest: " << report.manifest_path << "\n";
    if (report.checks_failed > 0) {
      std::cerr << report.checks_failed << " invariant checks failed\n";
      return kInvariantFailure;
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}
