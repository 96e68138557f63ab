#pragma once

#include <filesystem>

#include "fbident/experiment.hpp"

namespace fbident::tools {

/// Loads an experiment description from a JSON file. Relative paths inside
/// the file (input CSVs, model CSV, output_dir) resolve against the file's
/// own directory, so a config works no matter where the tool is launched
/// from. Unknown keys are rejected with a ConfigError naming them.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace fbident::tools
