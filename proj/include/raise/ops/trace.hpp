#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "raise/core/json.hpp"

namespace raise::ops {

/// One append-only trace record. `ts_ms` is wall clock; replay comparisons
/// mask it (together with latency/duration payload fields).
struct TraceEvent {
    long sequence = 0;
    std::string kind;
    std::optional<int> round;
    core::Json payload;
    long ts_ms = 0;
};

core::Json to_json_line(const TraceEvent& event);
TraceEvent trace_event_from_json(const core::Json& j);

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void emit(const std::string& kind, std::optional<int> round, core::Json payload) = 0;
};

/// Collects events in memory (tests, replay).
class TraceBuffer : public TraceSink {
public:
    void emit(const std::string& kind, std::optional<int> round, core::Json payload) override;
    const std::vector<TraceEvent>& events() const { return events_; }

private:
    std::vector<TraceEvent> events_;
};

/// Streams events to a JSONL file, one record per line, flushed per event.
class TraceWriter : public TraceSink {
public:
    explicit TraceWriter(const std::string& path);
    void emit(const std::string& kind, std::optional<int> round, core::Json payload) override;

private:
    std::ofstream out_;
    long sequence_ = 0;
};

struct TraceReadResult {
    std::vector<TraceEvent> events;
    bool truncated = false;        // trailing partial/unparseable line
    std::string truncation_error;
};

/// Reads a JSONL trace. Throws core::TraceError when the file is missing or
/// contains no parseable events; a trailing bad line is reported as truncation.
TraceReadResult read_trace(const std::string& path);

/// Canonical comparison form: object keys sorted, volatile keys (ts_ms,
/// latency_ms, duration_ms) zeroed recursively.
std::string canonical_event(const TraceEvent& event);

}  // namespace raise::ops
