#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "omx/cli/config.hpp"

namespace omx::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitNotConverged = 4,
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::string message;  // human-readable summary or error
};

// Output files go to `out_dir`, named <prefix>_<command>.<ext>. Errors are
// mapped onto exit codes rather than thrown.
CommandResult run_spectrum(const ScenarioConfig& config, const std::filesystem::path& out_dir);
CommandResult run_groundstate(const ScenarioConfig& config, const std::filesystem::path& out_dir);
CommandResult run_evolve(const ScenarioConfig& config, const std::filesystem::path& out_dir);
CommandResult run_validate(const ScenarioConfig& config, const std::filesystem::path& out_dir);

// Dispatches on "spectrum", "groundstate", "evolve" or "validate".
CommandResult run_command(const std::string& command, const ScenarioConfig& config,
                          const std::filesystem::path& out_dir);

// Loads a preset and/or a config file; a file given with a preset is applied
// as a JSON merge patch on top of the preset.
ScenarioConfig load_config(const std::string& preset_name, const std::string& config_path);

std::string tool_version();

}  // namespace omx::cli
