#pragma once

#include <string>

#include "absim/dqn.hpp"
#include "absim/tabular.hpp"
#include "absim/world.hpp"

namespace absim {

/// Everything one run needs: the scenario plus the agent parameter sets.
struct AppConfig {
    WorldConfig world;
    DqnParams dqn;
    QLearnParams tabular;
};

/// Parses and validates a JSON config ("//" comments allowed). Missing keys
/// fall back to the documented defaults; unknown keys are rejected so typos
/// fail loudly. Throws ConfigError with the field name on any violation.
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::string& path);

/// Fully resolved snapshot (all defaults filled in), suitable for exact
/// reproduction of a run.
std::string serialize_config(const AppConfig& config);
void save_config(const std::string& path, const AppConfig& config);

}  // namespace absim
