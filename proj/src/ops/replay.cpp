#include "raise/ops/replay.hpp"

#include <fstream>

#include "raise/core/errors.hpp"
#include "raise/engine/engine.hpp"
#include "raise/ops/config.hpp"
#include "raise/ops/trace.hpp"
#include "raise/sim/world.hpp"

namespace raise::ops {

ReplayResult replay_run(const std::filesystem::path& run_dir) {
    ReplayResult result;

    const std::filesystem::path config_path = run_dir / "config.json";
    const std::filesystem::path trace_path = run_dir / "trace.jsonl";

    FullConfig config;
    TraceReadResult recorded;
    try {
        config = load_config(config_path.string());
        recorded = read_trace(trace_path.string());
    } catch (const std::exception& e) {
        result.message = e.what();
        return result;
    }
    if (recorded.truncated) {
        result.message = "recorded trace is truncated: " + recorded.truncation_error;
        result.divergent_sequence = static_cast<long>(recorded.events.size()) + 1;
        return result;
    }
    if (config.run.backend_profile != "sim") {
        result.message = "replay requires a sim-backend trace";
        return result;
    }
    if (recorded.events.empty() || recorded.events.front().kind != "run_start") {
        result.message = "recorded trace does not start with run_start";
        result.divergent_sequence = 1;
        return result;
    }
    if (!recorded.events.front().payload.contains("user_prompt")) {
        result.message = "run_start event lacks the user prompt";
        result.divergent_sequence = 1;
        return result;
    }
    const std::string prompt = recorded.events.front().payload["user_prompt"].get<std::string>();

    TraceBuffer regenerated;
    core::ImageStore store;
    sim::SimBackends backends(config.sim_world.value_or(sim::WorldSpec{}), config.run.k_min);
    try {
        engine::Engine engine(config.run, backends.engine_backends(config.run.enable_grounding_tools), store,
                              &regenerated);
        engine.run(prompt);
    } catch (const std::exception& e) {
        result.message = std::string("replay execution failed: ") + e.what();
        return result;
    }

    const auto& replayed = regenerated.events();
    const std::size_t shared = std::min(recorded.events.size(), replayed.size());
    for (std::size_t i = 0; i < shared; ++i) {
        const std::string a = canonical_event(recorded.events[i]);
        const std::string b = canonical_event(replayed[i]);
        if (a != b) {
            result.divergent_sequence = recorded.events[i].sequence;
            result.message = "trace diverges at event " + std::to_string(recorded.events[i].sequence) + " (" +
                             recorded.events[i].kind + "): recorded " + a + " vs replayed " + b;
            return result;
        }
    }
    if (recorded.events.size() != replayed.size()) {
        result.divergent_sequence = static_cast<long>(shared) + 1;
        result.message = "trace length mismatch: recorded " + std::to_string(recorded.events.size()) +
                         " events, replayed " + std::to_string(replayed.size());
        return result;
    }

    result.ok = true;
    result.message = "replay matches the recorded trace (" + std::to_string(replayed.size()) + " events)";
    return result;
}

}  // namespace raise::ops
