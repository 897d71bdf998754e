#pragma once

#include <string_view>

#include "harness.hpp"

namespace chanest {

/// Applies one `key = value` configuration entry to the experiment. Throws
/// ConfigError naming the key on unknown keys or invalid values. The key set
/// is the flat union of the scenario, experiment and optimizer fields; see
/// config.cpp for the full list.
void apply_config_entry(ExperimentConfig& cfg, std::string_view key,
                        std::string_view value);

}  // namespace chanest
