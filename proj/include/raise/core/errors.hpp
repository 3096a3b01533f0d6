#pragma once

#include <stdexcept>
#include <string>

namespace raise::core {

/// A structured agent reply violated its output schema (terminal, after retries).
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// The chat backend could not be reached or returned a malformed transport-level reply.
struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

/// A generator/editor/scorer/grounding backend call failed.
struct BackendError : std::runtime_error {
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Round-level execution failure (every candidate in the round failed).
struct ExecutionError : std::runtime_error {
    explicit ExecutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Candidate construction failure (missing rewriter outputs, empty edit plan).
struct RefinementError : std::runtime_error {
    explicit RefinementError(const std::string& what) : std::runtime_error(what) {}
};

/// Trace file unreadable or inconsistent.
struct TraceError : std::runtime_error {
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace raise::core
