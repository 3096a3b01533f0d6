#pragma once

#include <optional>
#include <string>

#include "raise/core/json.hpp"
#include "raise/core/types.hpp"
#include "raise/sim/world.hpp"

namespace raise::ops {

/// Full config document: the run configuration plus, for the sim profile,
/// the hidden world parameters under the "sim" key.
struct FullConfig {
    core::RunConfig run;
    std::optional<sim::WorldSpec> sim_world;
};

core::Json to_json_document(const FullConfig& config);
FullConfig config_from_json(const core::Json& j);

/// Loads and validates a config file. Throws core::ConfigError naming the
/// offending field. Environment variables override endpoints only:
/// RAISE_GENERATOR_URL, RAISE_EDITOR_URL, RAISE_AGENT_URL, RAISE_SCORER_URL,
/// RAISE_GROUNDING_URL.
FullConfig load_config(const std::string& path);

/// Built-in defaults (sim profile with the default world).
FullConfig default_config();

void apply_env_overrides(core::RunConfig& config);

}  // namespace raise::ops
