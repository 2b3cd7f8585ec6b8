#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "locov/errors.hpp"
#include "locov/experiments.hpp"

namespace {

struct CommandState {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> cli_pairs;
};

// Every config key doubles as a --key option; file values apply first, then
// command-line values. The short help flag is dropped so that `--h` stays a
// bandwidth option.
void register_options(CLI::App* cmd, CommandState& state) {
  cmd->set_help_flag("--help", "print usage");
  cmd->add_option("--config", state.config_path, "key=value config file");
  for (const auto& key : locov::ExperimentConfig::known_keys()) {
    cmd->add_option_function<std::string>(
        "--" + key, [&state, key](const std::string& value) { state.cli_pairs.emplace_back(key, value); });
  }
}

locov::ExperimentConfig build_config(const std::string& experiment, const CommandState& state) {
  std::vector<std::pair<std::string, std::string>> overrides;
  if (!state.config_path.empty()) {
    auto file_pairs = locov::read_config_file(state.config_path);
    overrides.insert(overrides.end(), file_pairs.begin(), file_pairs.end());
  }
  overrides.insert(overrides.end(), state.cli_pairs.begin(), state.cli_pairs.end());
  return locov::resolve_config(experiment, overrides);
}

std::filesystem::path table_path(const locov::ExperimentConfig& cfg, const std::string& stem) {
  if (!cfg.out.empty()) return cfg.out;
  return std::filesystem::path(cfg.output_dir) / (stem + ".csv");
}

int run_and_write(const std::string& name, const CommandState& state) {
  auto start = std::chrono::steady_clock::now();
  locov::ExperimentConfig cfg = build_config(name, state);

  locov::ResultTable table = [&]() {
    if (name == "exp-spiral-geodesic") return locov::run_exp_spiral_geodesic(cfg);
    if (name == "exp-s1-eigenvalues") return locov::run_exp_s1_eigenvalues(cfg);
    if (name == "exp-alpha-sensitivity") return locov::run_exp_alpha_sensitivity(cfg);
    if (name == "sample") return locov::run_sample_export(cfg);
    return locov::run_adhoc(name, cfg);
  }();

  if (name != "sample") {
    std::filesystem::path path = table_path(cfg, name);
    table.write_file(path);
    std::cerr << "wrote " << path.string() << "\n";
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "%s finished in %.2f s\n", name.c_str(), elapsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-covariance manifold toolkit"};
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "exp-spiral-geodesic", "exp-s1-eigenvalues", "exp-alpha-sensitivity",
      "covgeo",              "eig-dist",           "lle",
      "ldr-lle",             "dm",                 "sample",
  };
  const std::vector<std::string> descriptions = {
      "local and Dijkstra geodesic errors on the log spiral",
      "LDR-LLE vs diffusion-maps spectrum on a circle",
      "EIG error exponents across truncation orders",
      "pairwise corrected geodesic distances for a cloud CSV",
      "EIG distances for listed pairs",
      "classic LLE embedding coordinates",
      "truncated-weight embedding and Laplacian eigenvalues",
      "diffusion-maps Laplacian eigenvalues",
      "export a synthetic manifold sample to CSV",
  };

  std::vector<CommandState> states(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i)
    register_options(app.add_subcommand(commands[i], descriptions[i]), states[i]);

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (app.got_subcommand(commands[i])) return run_and_write(commands[i], states[i]);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const locov::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
