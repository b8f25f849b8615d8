#pragma once

#include <string>
#include <vector>

#include "omx/cli/config.hpp"

namespace omx::cli {

std::vector<std::string> preset_names();

// Throws ConfigError listing the known names.
ScenarioConfig preset(const std::string& name);

}  // namespace omx::cli
