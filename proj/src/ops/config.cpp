#include "raise/ops/config.hpp"

#include <cstdlib>
#include <fstream>

#include "raise/core/errors.hpp"
#include "raise/engine/engine.hpp"

namespace raise::ops {

using core::Json;

Json to_json_document(const FullConfig& config) {
    Json j = config.run;
    if (config.sim_world) {
        j["sim"] = *config.sim_world;
    } else {
        j["sim"] = nullptr;
    }
    return j;
}

FullConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw core::ConfigError("config document must be a JSON object");
    FullConfig config;
    try {
        config.run = j.get<core::RunConfig>();
    } catch (const Json::exception& e) {
        throw core::ConfigError(std::string("config field has the wrong type: ") + e.what());
    }
    if (j.contains("sim") && !j.at("sim").is_null()) {
        try {
            config.sim_world = j.at("sim").get<sim::WorldSpec>();
        } catch (const Json::exception& e) {
            throw core::ConfigError(std::string("sim world field has the wrong type: ") + e.what());
        }
        sim::validate_world(*config.sim_world);
    }
    engine::validate_run_config(config.run);
    if (config.run.backend_profile == "sim" && !config.sim_world) {
        config.sim_world = sim::WorldSpec{};
    }
    return config;
}

FullConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw core::ConfigError("cannot open config file: " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw core::ConfigError("config file is not valid JSON: " + path);
    FullConfig config = config_from_json(j);
    apply_env_overrides(config.run);
    return config;
}

FullConfig default_config() {
    FullConfig config;
    config.sim_world = sim::WorldSpec{};
    apply_env_overrides(config.run);
    return config;
}

void apply_env_overrides(core::RunConfig& config) {
    const auto apply = [](const char* name, std::string& target) {
        if (const char* value = std::getenv(name)) {
            if (*value != '\0') target = value;
        }
    };
    apply("RAISE_GENERATOR_URL", config.generator_url);
    apply("RAISE_EDITOR_URL", config.editor_url);
    apply("RAISE_AGENT_URL", config.agent_url);
    apply("RAISE_SCORER_URL", config.scorer_url);
    apply("RAISE_GROUNDING_URL", config.grounding_url);
}

}  // namespace raise::ops
