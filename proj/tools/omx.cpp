// omx: command-line driver for the optomechanics scenarios.

#include <cstdio>
#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "omx/cli/commands.hpp"
#include "omx/cli/presets.hpp"

namespace cli = omx::cli;

int main(int argc, char** argv) {
  CLI::App app{"Truncated-Fock-space optomechanics simulations"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;

  std::string presets_help = "Built-in scenario:";
  for (const auto& n : cli::preset_names()) presets_help += " " + n;

  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "Diagonalize the undriven model and compare with the polaron levels"},
      {"groundstate", "Ground state, quadrature variances and Q function of the parametric oscillator"},
      {"evolve", "Closed or lossy time evolution with observable traces"},
      {"validate", "Compare a full model against its effective reduction"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Scenario JSON file (merged over --preset if both)");
    sub->add_option("--preset", preset_name, presets_help);
    sub->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  }

  std::string dump_name;
  CLI::App* dump = app.add_subcommand("preset", "Print a built-in scenario as JSON");
  dump->add_option("name", dump_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (dump->parsed()) {
    try {
      std::cout << cli::to_json(cli::preset(dump_name)).dump(2) << "\n";
      return cli::kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return cli::kExitConfig;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  cli::ScenarioConfig config;
  try {
    config = cli::load_config(preset_name, config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitConfig;
  }

  const std::string dir = out_dir.empty() ? config.output.directory : out_dir;
  const cli::CommandResult r = cli::run_command(command, config, dir);
  for (const auto& f : r.files) std::cout << f.string() << "\n";
  if (r.exit_code == cli::kExitOk)
    std::cerr << r.message << "\n";
  else
    std::cerr << "error: " << r.message << "\n";
  return r.exit_code;
}
