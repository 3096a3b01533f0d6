#include "raise/core/json.hpp"

#include "raise/core/errors.hpp"

namespace raise::core {

namespace {

template <typename T>
void set_optional(Json& j, const char* key, const std::optional<T>& v) {
    if (v.has_value()) {
        j[key] = *v;
    } else {
        j[key] = nullptr;
    }
}

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& v) {
    if (!j.contains(key) || j.at(key).is_null()) {
        v.reset();
    } else {
        v = j.at(key).get<T>();
    }
}

}  // namespace

void to_json(Json& j, const ImageRef& v) {
    j = Json{{"content_id", v.content_id},
             {"width", v.width},
             {"height", v.height},
             {"media_type", v.media_type}};
}

void from_json(const Json& j, ImageRef& v) {
    j.at("content_id").get_to(v.content_id);
    j.at("width").get_to(v.width);
    j.at("height").get_to(v.height);
    j.at("media_type").get_to(v.media_type);
}

void to_json(Json& j, const Requirement& v) {
    j = Json{{"index", v.index}, {"text", v.text}, {"major", v.major}};
}

void from_json(const Json& j, Requirement& v) {
    j.at("index").get_to(v.index);
    j.at("text").get_to(v.text);
    j.at("major").get_to(v.major);
}

void to_json(Json& j, const BinaryQuestion& v) {
    j = Json{{"index", v.index}, {"text", v.text}};
}

void from_json(const Json& j, BinaryQuestion& v) {
    j.at("index").get_to(v.index);
    j.at("text").get_to(v.text);
}

void to_json(Json& j, const RequirementChecklist& v) {
    j = Json{{"requirements", v.requirements},
             {"questions", v.questions},
             {"satisfied", v.satisfied},
             {"unsatisfied", v.unsatisfied}};
}

void from_json(const Json& j, RequirementChecklist& v) {
    j.at("requirements").get_to(v.requirements);
    j.at("questions").get_to(v.questions);
    j.at("satisfied").get_to(v.satisfied);
    j.at("unsatisfied").get_to(v.unsatisfied);
}

void to_json(Json& j, const AnalyzerOutput& v) {
    j = Json{{"reasoning", v.reasoning},
             {"original_prompt_echo", v.original_prompt_echo},
             {"current_prompt_echo", v.current_prompt_echo},
             {"checklist", v.checklist},
             {"decision", v.decision == AnalyzerDecision::kEnd ? "end" : "continue"}};
}

void from_json(const Json& j, AnalyzerOutput& v) {
    j.at("reasoning").get_to(v.reasoning);
    j.at("original_prompt_echo").get_to(v.original_prompt_echo);
    j.at("current_prompt_echo").get_to(v.current_prompt_echo);
    j.at("checklist").get_to(v.checklist);
    const std::string d = j.at("decision").get<std::string>();
    if (d == "end") {
        v.decision = AnalyzerDecision::kEnd;
    } else if (d == "continue") {
        v.decision = AnalyzerDecision::kContinue;
    } else {
        throw SchemaError("unknown analyzer decision: " + d);
    }
}

void to_json(Json& j, const GenRewriteOutput& v) {
    j = Json{{"reasoning", v.reasoning},
             {"planned_adjustments", v.planned_adjustments},
             {"adjusted_prompt", v.adjusted_prompt}};
}

void from_json(const Json& j, GenRewriteOutput& v) {
    j.at("reasoning").get_to(v.reasoning);
    j.at("planned_adjustments").get_to(v.planned_adjustments);
    j.at("adjusted_prompt").get_to(v.adjusted_prompt);
}

void to_json(Json& j, const EditRewriteOutput& v) {
    j = Json{{"reasoning", v.reasoning},
             {"planned_edits", v.planned_edits},
             {"top_edit", v.top_edit},
             {"comprehensive_edit", v.comprehensive_edit},
             {"random_edit", v.random_edit}};
}

void from_json(const Json& j, EditRewriteOutput& v) {
    j.at("reasoning").get_to(v.reasoning);
    j.at("planned_edits").get_to(v.planned_edits);
    j.at("top_edit").get_to(v.top_edit);
    j.at("comprehensive_edit").get_to(v.comprehensive_edit);
    j.at("random_edit").get_to(v.random_edit);
}

void to_json(Json& j, const CandidateId& v) {
    j = Json{{"round", v.round}, {"slot", v.slot}};
}

void from_json(const Json& j, CandidateId& v) {
    j.at("round").get_to(v.round);
    j.at("slot").get_to(v.slot);
}

void to_json(Json& j, const Candidate& v) {
    j = Json{{"round", v.round},
             {"slot", v.slot},
             {"seed", v.seed},
             {"prompt", v.prompt},
             {"kind", to_string(v.kind)}};
    set_optional(j, "reference", v.reference);
}

void from_json(const Json& j, Candidate& v) {
    j.at("round").get_to(v.round);
    j.at("slot").get_to(v.slot);
    j.at("seed").get_to(v.seed);
    j.at("prompt").get_to(v.prompt);
    get_optional(j, "reference", v.reference);
    const auto kind = candidate_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw SchemaError("unknown candidate kind");
    v.kind = *kind;
}

void to_json(Json& j, const ScoredCandidate& v) {
    j = Json{{"candidate", v.candidate}, {"output", v.output}, {"fitness", v.fitness}};
}

void from_json(const Json& j, ScoredCandidate& v) {
    j.at("candidate").get_to(v.candidate);
    j.at("output").get_to(v.output);
    j.at("fitness").get_to(v.fitness);
}

void to_json(Json& j, const Region& v) {
    j = Json{{"label", v.label}, {"bbox", v.bbox}, {"mean_depth", v.mean_depth}};
}

void from_json(const Json& j, Region& v) {
    j.at("label").get_to(v.label);
    j.at("bbox").get_to(v.bbox);
    j.at("mean_depth").get_to(v.mean_depth);
}

void to_json(Json& j, const GroundingEvidence& v) {
    j = Json{{"caption", v.caption},
             {"regions", v.regions},
             {"image_width", v.image_width},
             {"image_height", v.image_height}};
}

void from_json(const Json& j, GroundingEvidence& v) {
    j.at("caption").get_to(v.caption);
    j.at("regions").get_to(v.regions);
    j.at("image_width").get_to(v.image_width);
    j.at("image_height").get_to(v.image_height);
}

void to_json(Json& j, const VerificationTriplet& v) {
    j = Json{{"question", v.question},
             {"answer", v.answer == Answer::kYes ? "Yes" : "No"},
             {"explanation", v.explanation}};
}

void from_json(const Json& j, VerificationTriplet& v) {
    j.at("question").get_to(v.question);
    j.at("explanation").get_to(v.explanation);
    const std::string a = j.at("answer").get<std::string>();
    if (a == "Yes") {
        v.answer = Answer::kYes;
    } else if (a == "No") {
        v.answer = Answer::kNo;
    } else {
        throw SchemaError("verifier answer must be Yes or No");
    }
}

void to_json(Json& j, const VerifierOutput& v) {
    j = Json{{"reasoning", v.reasoning},
             {"image_caption", v.image_caption},
             {"triplets", v.triplets},
             {"summary", v.summary},
             {"all_satisfied", v.all_satisfied}};
}

void from_json(const Json& j, VerifierOutput& v) {
    j.at("reasoning").get_to(v.reasoning);
    j.at("image_caption").get_to(v.image_caption);
    j.at("triplets").get_to(v.triplets);
    j.at("summary").get_to(v.summary);
    j.at("all_satisfied").get_to(v.all_satisfied);
}

void to_json(Json& j, const RoundRecord& v) {
    j = Json{{"round", v.round},
             {"analyzer", v.analyzer},
             {"candidates", v.candidates},
             {"scored", v.scored},
             {"agent_calls", v.agent_calls},
             {"samples", v.samples}};
    set_optional(j, "gen_rewrite", v.gen_rewrite);
    set_optional(j, "edit_rewrite", v.edit_rewrite);
    set_optional(j, "round_best", v.round_best);
    set_optional(j, "evidence", v.evidence);
    set_optional(j, "verifier", v.verifier);
}

void from_json(const Json& j, RoundRecord& v) {
    j.at("round").get_to(v.round);
    j.at("analyzer").get_to(v.analyzer);
    j.at("candidates").get_to(v.candidates);
    j.at("scored").get_to(v.scored);
    j.at("agent_calls").get_to(v.agent_calls);
    j.at("samples").get_to(v.samples);
    get_optional(j, "gen_rewrite", v.gen_rewrite);
    get_optional(j, "edit_rewrite", v.edit_rewrite);
    get_optional(j, "round_best", v.round_best);
    get_optional(j, "evidence", v.evidence);
    get_optional(j, "verifier", v.verifier);
}

void to_json(Json& j, const TerminationReason& v) {
    j = Json{{"kind", to_string(v.kind)}, {"round", v.round}};
}

void from_json(const Json& j, TerminationReason& v) {
    j.at("round").get_to(v.round);
    const auto kind = termination_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw SchemaError("unknown termination kind");
    v.kind = *kind;
}

void to_json(Json& j, const RunConfig& v) {
    j = Json{{"k_min", v.k_min},
             {"k_max", v.k_max},
             {"early_resample", v.early_resample},
             {"early_rewrite", v.early_rewrite},
             {"late_rewrite", v.late_rewrite},
             {"run_seed", v.run_seed},
             {"parallelism", v.parallelism},
             {"generator_url", v.generator_url},
             {"editor_url", v.editor_url},
             {"agent_url", v.agent_url},
             {"scorer_url", v.scorer_url},
             {"grounding_url", v.grounding_url},
             {"timeout_s", v.timeout_s},
             {"retry_limit", v.retry_limit},
             {"image_width", v.image_width},
             {"image_height", v.image_height},
             {"steps", v.steps},
             {"enable_editing", v.enable_editing},
             {"enable_grounding_tools", v.enable_grounding_tools},
             {"force_rounds", v.force_rounds},
             {"backend_profile", v.backend_profile}};
}

void from_json(const Json& j, RunConfig& v) {
    v = RunConfig{};
    if (j.contains("k_min")) j.at("k_min").get_to(v.k_min);
    if (j.contains("k_max")) j.at("k_max").get_to(v.k_max);
    if (j.contains("early_resample")) j.at("early_resample").get_to(v.early_resample);
    if (j.contains("early_rewrite")) j.at("early_rewrite").get_to(v.early_rewrite);
    if (j.contains("late_rewrite")) j.at("late_rewrite").get_to(v.late_rewrite);
    if (j.contains("run_seed")) j.at("run_seed").get_to(v.run_seed);
    if (j.contains("parallelism")) j.at("parallelism").get_to(v.parallelism);
    if (j.contains("generator_url")) j.at("generator_url").get_to(v.generator_url);
    if (j.contains("editor_url")) j.at("editor_url").get_to(v.editor_url);
    if (j.contains("agent_url")) j.at("agent_url").get_to(v.agent_url);
    if (j.contains("scorer_url")) j.at("scorer_url").get_to(v.scorer_url);
    if (j.contains("grounding_url")) j.at("grounding_url").get_to(v.grounding_url);
    if (j.contains("timeout_s")) j.at("timeout_s").get_to(v.timeout_s);
    if (j.contains("retry_limit")) j.at("retry_limit").get_to(v.retry_limit);
    if (j.contains("image_width")) j.at("image_width").get_to(v.image_width);
    if (j.contains("image_height")) j.at("image_height").get_to(v.image_height);
    if (j.contains("steps")) j.at("steps").get_to(v.steps);
    if (j.contains("enable_editing")) j.at("enable_editing").get_to(v.enable_editing);
    if (j.contains("enable_grounding_tools")) j.at("enable_grounding_tools").get_to(v.enable_grounding_tools);
    if (j.contains("force_rounds")) j.at("force_rounds").get_to(v.force_rounds);
    if (j.contains("backend_profile")) j.at("backend_profile").get_to(v.backend_profile);
}

void to_json(Json& j, const RunState& v) {
    j = Json{{"user_prompt", v.user_prompt},
             {"config", v.config},
             {"rounds", v.rounds},
             {"termination", v.termination},
             {"total_samples", v.total_samples},
             {"total_agent_calls", v.total_agent_calls}};
    set_optional(j, "global_best", v.global_best);
}

void from_json(const Json& j, RunState& v) {
    j.at("user_prompt").get_to(v.user_prompt);
    j.at("config").get_to(v.config);
    j.at("rounds").get_to(v.rounds);
    j.at("termination").get_to(v.termination);
    j.at("total_samples").get_to(v.total_samples);
    j.at("total_agent_calls").get_to(v.total_agent_calls);
    get_optional(j, "global_best", v.global_best);
}

}  // namespace raise::core
