#pragma once

#include <filesystem>
#include <string>

#include "raise/core/image_store.hpp"
#include "raise/core/types.hpp"
#include "raise/ops/config.hpp"

namespace raise::ops {

/// Self-contained run directory:
///   <out>/<run-id>/{config.json, trace.jsonl, images/r<round>_s<slot>.png,
///                   final.png, summary.json}
struct RunPaths {
    std::filesystem::path dir;
    std::filesystem::path config_json;
    std::filesystem::path trace_jsonl;
    std::filesystem::path images_dir;
    std::filesystem::path final_png;
    std::filesystem::path summary_json;
};

/// Deterministic id: run_s<seed>_<8-hex prompt hash>.
std::string run_id_for(const std::string& prompt, std::uint64_t seed);

RunPaths run_paths(const std::filesystem::path& out_dir, const std::string& run_id);
RunPaths prepare_run_dir(const std::filesystem::path& out_dir, const std::string& run_id);

/// Writes candidate images, final.png and summary.json after a run.
void persist_run(const RunPaths& paths, const core::RunState& state, const core::ImageStore& store);

struct RunOutcome {
    core::RunState state;
    RunPaths paths;
};

/// Executes one prompt end to end: prepares the run directory, snapshots the
/// config, wires backends per backend_profile, streams the trace, persists
/// results. Backend construction errors throw; engine-level failures are
/// reported through state.termination.
RunOutcome run_one(const FullConfig& config, const std::string& prompt, const std::filesystem::path& out_dir);

}  // namespace raise::ops
