#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raise/core/errors.hpp"
#include "raise/core/image_store.hpp"
#include "raise/core/types.hpp"

namespace raise::exec {

struct GenRequest {
    std::string prompt;
    std::uint64_t seed = 0;
    int steps = 28;
    int width = 1024;
    int height = 1024;
};

struct EditRequest {
    std::string instruction;
    std::uint64_t seed = 0;
    int steps = 28;
    core::Bytes reference_png;
};

/// Text-to-image backend. Throws core::BackendError on failure.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual core::Bytes generate(const GenRequest& request) = 0;
};

/// Instructional editing backend. Throws core::BackendError on failure.
class EditorBackend {
public:
    virtual ~EditorBackend() = default;
    virtual core::Bytes edit(const EditRequest& request) = 0;
};

struct ExecutionResult {
    core::CandidateId candidate;
    std::optional<core::ImageRef> output;  // absent on failure
    std::string failure;                   // failure note when output is absent
    double duration_ms = 0.0;
};

/// Raised when every candidate in a round failed. Carries the per-candidate
/// results so the caller can still account for the attempted executions.
struct PopulationError : core::ExecutionError {
    PopulationError(const std::string& what, std::vector<ExecutionResult> r)
        : core::ExecutionError(what), results(std::move(r)) {}
    std::vector<ExecutionResult> results;
};

/// Dispatches one candidate: no reference -> generator, reference -> editor.
/// The returned image is stored with its sniffed dimensions.
core::ImageRef execute_candidate(const core::Candidate& c, const core::RunConfig& config,
                                 GeneratorBackend& generator, EditorBackend& editor, core::ImageStore& store);

/// Executes the population with at most config.parallelism requests in
/// flight; results come back in slot order regardless of completion order.
/// Per-candidate failures become failure notes; if every candidate fails the
/// call throws core::ExecutionError.
std::vector<ExecutionResult> execute_population(const std::vector<core::Candidate>& candidates,
                                                const core::RunConfig& config, GeneratorBackend& generator,
                                                EditorBackend& editor, core::ImageStore& store);

}  // namespace raise::exec
