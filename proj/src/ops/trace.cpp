#include "raise/ops/trace.hpp"

#include <chrono>

#include "raise/core/errors.hpp"

namespace raise::ops {

using core::Json;

namespace {

long now_ms() {
    return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count());
}

void mask_volatile(Json& j) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "ts_ms" || it.key() == "latency_ms" || it.key() == "duration_ms") {
                it.value() = 0;
            } else {
                mask_volatile(it.value());
            }
        }
    } else if (j.is_array()) {
        for (Json& item : j) mask_volatile(item);
    }
}

}  // namespace

Json to_json_line(const TraceEvent& event) {
    Json j{{"sequence", event.sequence},
           {"kind", event.kind},
           {"payload", event.payload},
           {"ts_ms", event.ts_ms}};
    if (event.round) {
        j["round"] = *event.round;
    } else {
        j["round"] = nullptr;
    }
    return j;
}

TraceEvent trace_event_from_json(const Json& j) {
    TraceEvent e;
    j.at("sequence").get_to(e.sequence);
    j.at("kind").get_to(e.kind);
    e.payload = j.at("payload");
    j.at("ts_ms").get_to(e.ts_ms);
    if (j.contains("round") && !j.at("round").is_null()) e.round = j.at("round").get<int>();
    return e;
}

void TraceBuffer::emit(const std::string& kind, std::optional<int> round, Json payload) {
    TraceEvent e;
    e.sequence = static_cast<long>(events_.size()) + 1;
    e.kind = kind;
    e.round = round;
    e.payload = std::move(payload);
    e.ts_ms = now_ms();
    events_.push_back(std::move(e));
}

TraceWriter::TraceWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw core::TraceError("cannot open trace file for writing: " + path);
}

void TraceWriter::emit(const std::string& kind, std::optional<int> round, Json payload) {
    TraceEvent e;
    e.sequence = ++sequence_;
    e.kind = kind;
    e.round = round;
    e.payload = std::move(payload);
    e.ts_ms = now_ms();
    out_ << to_json_line(e).dump() << '\n';
    out_.flush();
    if (!out_) throw core::TraceError("trace write failed");
}

TraceReadResult read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw core::TraceError("cannot open trace file: " + path);

    TraceReadResult result;
    std::string line;
    long expected_sequence = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.truncated = true;
            result.truncation_error = "unparseable trace line after event " +
                                      std::to_string(result.events.size());
            break;
        }
        TraceEvent e;
        try {
            e = trace_event_from_json(j);
        } catch (const std::exception& ex) {
            result.truncated = true;
            result.truncation_error = std::string("malformed trace event: ") + ex.what();
            break;
        }
        if (e.sequence != expected_sequence) {
            result.truncated = true;
            result.truncation_error = "trace sequence gap at event " + std::to_string(expected_sequence);
            break;
        }
        ++expected_sequence;
        result.events.push_back(std::move(e));
    }
    if (result.events.empty()) {
        throw core::TraceError("trace contains no parseable events: " + path +
                               (result.truncation_error.empty() ? "" : " (" + result.truncation_error + ")"));
    }
    return result;
}

std::string canonical_event(const TraceEvent& event) {
    Json j = to_json_line(event);
    mask_volatile(j);
    return j.dump();
}

}  // namespace raise::ops
