#include "raise/ops/metrics.hpp"

#include <algorithm>

#include "raise/core/errors.hpp"
#include "raise/ops/trace.hpp"

namespace raise::ops {

using core::Json;

namespace {

int completed_rounds(const core::RunState& state) {
    int completed = 0;
    for (const core::RoundRecord& r : state.rounds) {
        if (r.samples > 0) ++completed;
    }
    return completed;
}

void finalize(MetricsReport& report) {
    if (report.runs > 0) {
        report.avg_samples = static_cast<double>(report.total_samples) / report.runs;
        report.avg_agent_calls = static_cast<double>(report.total_agent_calls) / report.runs;
    }
}

}  // namespace

Json to_json(const MetricsReport& report) {
    Json rounds = Json::object();
    for (const auto& [rounds_used, count] : report.completed_rounds_histogram) {
        rounds[std::to_string(rounds_used)] = count;
    }
    return Json{{"runs", report.runs},
                {"total_samples", report.total_samples},
                {"total_agent_calls", report.total_agent_calls},
                {"avg_samples", report.avg_samples},
                {"avg_agent_calls", report.avg_agent_calls},
                {"termination_histogram", report.termination_histogram},
                {"completed_rounds_histogram", rounds}};
}

MetricsReport metrics_from_states(const std::vector<core::RunState>& states) {
    MetricsReport report;
    report.runs = static_cast<int>(states.size());
    for (const core::RunState& s : states) {
        report.total_samples += s.total_samples;
        report.total_agent_calls += s.total_agent_calls;
        report.termination_histogram[core::to_string(s.termination.kind)]++;
        report.completed_rounds_histogram[completed_rounds(s)]++;
    }
    finalize(report);
    return report;
}

MetricsReport metrics_from_traces(const std::vector<std::filesystem::path>& trace_paths) {
    MetricsReport report;
    for (const std::filesystem::path& path : trace_paths) {
        const TraceReadResult trace = read_trace(path.string());
        bool saw_run_end = false;
        int completed = 0;
        for (const TraceEvent& e : trace.events) {
            if (e.kind == "round_end" && e.payload.value("samples", 0) > 0) ++completed;
            if (e.kind == "run_end") {
                saw_run_end = true;
                report.total_samples += e.payload.value("total_samples", 0L);
                report.total_agent_calls += e.payload.value("total_agent_calls", 0L);
                if (e.payload.contains("termination")) {
                    report.termination_histogram[e.payload["termination"].value("kind", "error")]++;
                }
            }
        }
        if (!saw_run_end) {
            throw core::TraceError("trace has no run_end event: " + path.string());
        }
        report.completed_rounds_histogram[completed]++;
        ++report.runs;
    }
    finalize(report);
    return report;
}

std::vector<std::filesystem::path> find_traces(const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> traces;
    if (!std::filesystem::is_directory(out_dir)) return traces;
    for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
        if (!entry.is_directory()) continue;
        const std::filesystem::path trace = entry.path() / "trace.jsonl";
        if (std::filesystem::is_regular_file(trace)) traces.push_back(trace);
    }
    std::sort(traces.begin(), traces.end());
    return traces;
}

}  // namespace raise::ops
