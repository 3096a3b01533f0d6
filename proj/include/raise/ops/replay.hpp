#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace raise::ops {

struct ReplayResult {
    bool ok = false;
    std::optional<long> divergent_sequence;  // first divergent/missing event
    std::string message;
};

/// Re-executes a sim-backend run from its run directory (config.json +
/// trace.jsonl) and compares the regenerated trace with the recorded one,
/// timestamps and latencies masked. Only sim-profile traces can be replayed.
ReplayResult replay_run(const std::filesystem::path& run_dir);

}  // namespace raise::ops
