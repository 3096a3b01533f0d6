#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raise/agents/protocol.hpp"
#include "raise/core/image_store.hpp"
#include "raise/core/types.hpp"
#include "raise/exec/execution.hpp"
#include "raise/ground/grounding.hpp"
#include "raise/ops/trace.hpp"

namespace raise::engine {

/// External fitness oracle; maps (image, ORIGINAL user prompt) to a real
/// alignment score. Only the ordering of scores is consumed. Scorer calls are
/// never counted in the agent-call budget.
class ScorerBackend {
public:
    virtual ~ScorerBackend() = default;
    virtual double score(const core::Bytes& png, const std::string& user_prompt) = 0;
};

struct EngineBackends {
    agents::ChatBackend* chat = nullptr;
    exec::GeneratorBackend* generator = nullptr;
    exec::EditorBackend* editor = nullptr;
    ScorerBackend* scorer = nullptr;
    ground::GroundingBackend* grounding = nullptr;  // optional (w/o-vision-tools ablation)
};

struct ScoreOutcome {
    std::vector<core::ScoredCandidate> scored;        // finite scores only, slot order
    std::vector<core::CandidateId> score_failures;    // excluded from selection, noted in trace
};

/// Scores every successful execution against the ORIGINAL user prompt.
/// A failed or non-finite scorer reply excludes that candidate from selection.
ScoreOutcome score_candidates(const std::vector<exec::ExecutionResult>& results,
                              const std::vector<core::Candidate>& candidates, const std::string& user_prompt,
                              ScorerBackend& scorer, const core::ImageStore& store);

struct SelectedBests {
    core::CandidateId round_best;
    double round_best_fitness = 0.0;
    core::CandidateId global_best;
    double global_best_fitness = 0.0;
};

/// Argmax with the documented tie-break: earlier round wins, then lower slot.
SelectedBests select_bests(const std::vector<core::ScoredCandidate>& scored,
                           const std::optional<std::pair<core::CandidateId, double>>& prior_global_best);

/// Stopping rule. Call with verifier_flag absent for the pre-population check
/// (analyzer decision) and present for the post-verification check. Returns
/// the termination reason, or nullopt to continue. --force-rounds disables
/// the adaptive stops and terminates with max_rounds at the forced count.
std::optional<core::TerminationReason> decide_stop(int round, core::AnalyzerDecision analyzer_decision,
                                                   std::optional<bool> verifier_flag,
                                                   const core::RunConfig& config);

/// Throws core::ConfigError when a RunConfig invariant is violated.
void validate_run_config(const core::RunConfig& config);

/// The control loop: per round analyze -> (stop?) -> schedule/build ->
/// execute -> score/select -> ground/verify -> (stop?), with budget
/// accounting and final-output selection.
class Engine {
public:
    Engine(core::RunConfig config, EngineBackends backends, core::ImageStore& store,
           ops::TraceSink* trace = nullptr);

    core::RunState run(const std::string& user_prompt);

private:
    void emit(const std::string& kind, std::optional<int> round, core::Json payload);

    core::RunConfig config_;
    EngineBackends backends_;
    core::ImageStore& store_;
    ops::TraceSink* trace_;
};

}  // namespace raise::engine
