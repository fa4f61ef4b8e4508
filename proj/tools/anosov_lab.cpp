#include "anosov/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int run(const std::string& path, const anosov::RunOverrides& overrides) {
  anosov::ExperimentConfig config = anosov::load_config(path);
  anosov::apply_overrides(config, overrides);
  const anosov::RunResult result = anosov::run_experiment(config);
  const auto& s = result.summary;
  std::cout << config.name << " (" << config.kind << ", R=" << config.radius << ", d="
            << s["representation"]["dim"].get<int>() << ")\n";
  for (const auto& v : s["verdicts"]) {
    std::cout << "  " << (v["pass"].get<bool>() ? "pass" : "FAIL") << "  " << v["name"].get<std::string>()
              << ": " << v["detail"].get<std::string>() << "\n";
  }
  for (const auto& w : s["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
  std::cout << "  wrote " << result.artifacts.size() << " files to " << config.out_dir << "\n";
  return result.exit_code;
}

int list_examples() {
  for (const auto& e : anosov::example_catalog()) {
    std::cout << e.name << "\t" << e.description << "\t" << e.path.string() << "\n";
  }
  return anosov::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on Anosov representations"};
  app.set_version_flag("--version", anosov::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  anosov::RunOverrides overrides;
  int radius = 0;
  std::string out_dir;
  std::uint64_t seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  auto* radius_opt = run_cmd->add_option("--radius", radius, "Ball radius")->check(CLI::NonNegativeNumber);
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed for sampled scans");

  auto* examples_cmd = app.add_subcommand("examples", "List the shipped example configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : anosov::kExitError;
  }

  try {
    if (*examples_cmd) return list_examples();
    if (*radius_opt) overrides.radius = radius;
    if (*out_opt) overrides.out_dir = out_dir;
    if (*seed_opt) overrides.seed = seed;
    return run(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "anosov-lab: " << e.what() << "\n";
    return anosov::kExitError;
  }
}
