#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "raise/core/util.hpp"

namespace raise::core {

/// Opaque handle to image bytes held in the run's ImageStore. The engine
/// never decodes pixel data; only backends interpret it.
struct ImageRef {
    std::string content_id;
    int width = 0;
    int height = 0;
    std::string media_type = "image/png";

    bool operator==(const ImageRef&) const = default;
};

/// One atomic, verifiable visual condition extracted from the prompt.
/// `major` marks the classes that gate the analyzer's stopping decision
/// (subjects, counts, attributes, colors, spatial relations, embedded text).
struct Requirement {
    int index = 0;
    std::string text;
    bool major = true;

    bool operator==(const Requirement&) const = default;
};

/// Yes/No question paired one-to-one with the requirement of the same index.
struct BinaryQuestion {
    int index = 0;
    std::string text;

    bool operator==(const BinaryQuestion&) const = default;
};

struct RequirementChecklist {
    std::vector<Requirement> requirements;
    std::vector<BinaryQuestion> questions;
    std::set<int> satisfied;
    std::set<int> unsatisfied;

    bool operator==(const RequirementChecklist&) const = default;
};

enum class AnalyzerDecision { kContinue, kEnd };

struct AnalyzerOutput {
    std::string reasoning;
    std::string original_prompt_echo;
    std::string current_prompt_echo;
    RequirementChecklist checklist;
    AnalyzerDecision decision = AnalyzerDecision::kContinue;

    bool operator==(const AnalyzerOutput&) const = default;
};

struct GenRewriteOutput {
    std::string reasoning;
    std::vector<std::string> planned_adjustments;
    std::string adjusted_prompt;

    bool operator==(const GenRewriteOutput&) const = default;
};

/// random_edit is filled by the refinement module, not the backend.
struct EditRewriteOutput {
    std::string reasoning;
    std::vector<std::string> planned_edits;
    std::string top_edit;
    std::string comprehensive_edit;
    std::string random_edit;

    bool operator==(const EditRewriteOutput&) const = default;
};

enum class CandidateKind { kResample, kRewrite, kEditTop, kEditRandom, kEditComp };

bool is_edit_kind(CandidateKind k);
const char* to_string(CandidateKind k);
std::optional<CandidateKind> candidate_kind_from_string(const std::string& s);

/// (round, slot) uniquely identifies a candidate within a run.
struct CandidateId {
    int round = 0;
    int slot = 0;

    bool operator==(const CandidateId&) const = default;
    auto operator<=>(const CandidateId&) const = default;
};

/// One (seed, prompt, optional reference image, kind) tuple awaiting execution.
struct Candidate {
    int round = 0;
    int slot = 0;
    std::uint64_t seed = 0;
    std::string prompt;
    std::optional<ImageRef> reference;
    CandidateKind kind = CandidateKind::kResample;

    CandidateId id() const { return {round, slot}; }
    bool operator==(const Candidate&) const = default;
};

struct ScoredCandidate {
    Candidate candidate;
    ImageRef output;
    double fitness = 0.0;  // finite, higher is better

    bool operator==(const ScoredCandidate&) const = default;
};

struct Region {
    std::string label;
    std::array<int, 4> bbox{};  // [x_min, y_min, x_max, y_max], pixels
    int mean_depth = 0;         // [0, 255]

    bool operator==(const Region&) const = default;
};

struct GroundingEvidence {
    std::string caption;
    std::vector<Region> regions;
    int image_width = 0;
    int image_height = 0;

    bool operator==(const GroundingEvidence&) const = default;
};

enum class Answer { kYes, kNo };

struct VerificationTriplet {
    std::string question;
    Answer answer = Answer::kNo;
    std::string explanation;

    bool operator==(const VerificationTriplet&) const = default;
};

struct VerifierOutput {
    std::string reasoning;
    std::string image_caption;
    std::vector<VerificationTriplet> triplets;
    std::string summary;
    bool all_satisfied = false;

    bool operator==(const VerifierOutput&) const = default;
};

/// Full record of one round. The trailing record of a run stopped by the
/// analyzer carries only the analyzer output (no candidates, no round_best).
struct RoundRecord {
    int round = 0;
    AnalyzerOutput analyzer;
    std::optional<GenRewriteOutput> gen_rewrite;
    std::optional<EditRewriteOutput> edit_rewrite;
    std::vector<Candidate> candidates;
    std::vector<ScoredCandidate> scored;
    std::optional<CandidateId> round_best;
    std::optional<GroundingEvidence> evidence;
    std::optional<VerifierOutput> verifier;
    int agent_calls = 0;
    int samples = 0;

    bool operator==(const RoundRecord&) const = default;
};

enum class TerminationKind { kAnalyzerEnd, kVerifierAllSatisfied, kMaxRounds, kError };

const char* to_string(TerminationKind k);
std::optional<TerminationKind> termination_kind_from_string(const std::string& s);

struct TerminationReason {
    TerminationKind kind = TerminationKind::kError;
    int round = 0;

    bool operator==(const TerminationReason&) const = default;
};

struct RunConfig {
    int k_min = 2;
    int k_max = 4;
    int early_resample = 4;
    int early_rewrite = 4;
    int late_rewrite = 5;  // plus the fixed edit triple {top, random, comp}
    std::uint64_t run_seed = 0;
    int parallelism = 4;
    std::string generator_url;
    std::string editor_url;
    std::string agent_url;
    std::string scorer_url;
    std::string grounding_url;
    double timeout_s = 300.0;
    int retry_limit = 2;
    int image_width = 1024;
    int image_height = 1024;
    int steps = 28;
    bool enable_editing = true;
    bool enable_grounding_tools = true;
    int force_rounds = 0;  // 0 = adaptive; N = run exactly N rounds (testing hook)
    std::string backend_profile = "sim";

    bool operator==(const RunConfig&) const = default;
};

struct RunState {
    std::string user_prompt;
    RunConfig config;
    std::vector<RoundRecord> rounds;
    std::optional<CandidateId> global_best;
    TerminationReason termination;
    long total_samples = 0;
    long total_agent_calls = 0;

    bool operator==(const RunState&) const = default;
};

/// Keyword-category classifier behind Requirement.major: subjects, counts,
/// attributes, colors, spatial relations and embedded text are major;
/// lighting, mood, focus and framing are minor. Unmatched text defaults to
/// major so the stopping rule stays conservative.
bool classify_major(const std::string& requirement_text);

/// Returns the checklist iff every RequirementChecklist invariant holds for
/// the given round (round 1 additionally requires satisfied to be empty).
/// Throws SchemaError naming the first violated invariant.
const RequirementChecklist& validate_checklist(const RequirementChecklist& checklist, int round);

/// Recomputes all_satisfied as the conjunction of triplet answers.
/// `corrected`, when given, reports whether the raw flag disagreed.
VerifierOutput enforce_verifier_consistency(VerifierOutput raw, bool* corrected = nullptr);

}  // namespace raise::core
