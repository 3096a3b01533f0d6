#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "raise/core/json.hpp"
#include "raise/core/types.hpp"

namespace raise::ops {

/// Aggregate over a set of runs (the efficiency columns).
struct MetricsReport {
    int runs = 0;
    long total_samples = 0;
    long total_agent_calls = 0;
    double avg_samples = 0.0;      // total_samples / runs, exactly
    double avg_agent_calls = 0.0;  // total_agent_calls / runs, exactly
    std::map<std::string, int> termination_histogram;
    std::map<int, int> completed_rounds_histogram;
};

core::Json to_json(const MetricsReport& report);

MetricsReport metrics_from_states(const std::vector<core::RunState>& states);

/// Recomputes the report from raw trace files (run_end + round_end events).
MetricsReport metrics_from_traces(const std::vector<std::filesystem::path>& trace_paths);

/// Collects every <dir>/*/trace.jsonl under a batch output directory.
std::vector<std::filesystem::path> find_traces(const std::filesystem::path& out_dir);

}  // namespace raise::ops
