#include "raise/agents/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "raise/core/errors.hpp"

namespace raise::agents {

using core::Json;

namespace {

// Schema violation subtype with its own one-retry budget.
struct UnchangedPromptError : core::SchemaError {
    using core::SchemaError::SchemaError;
};

std::string quoted(const std::string& s) {
    return Json(s).dump();
}

const Json& require_field(const Json& j, const char* key, Json::value_t type, const char* what) {
    if (!j.contains(key)) throw core::SchemaError(std::string(what) + ": missing field " + key);
    const Json& v = j.at(key);
    const bool ok = (type == Json::value_t::string && v.is_string()) ||
                    (type == Json::value_t::array && v.is_array()) ||
                    (type == Json::value_t::boolean && v.is_boolean());
    if (!ok) throw core::SchemaError(std::string(what) + ": field " + key + " has the wrong type");
    return v;
}

std::vector<std::string> string_list(const Json& j, const char* key, const char* what) {
    const Json& arr = require_field(j, key, Json::value_t::array, what);
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (const Json& item : arr) {
        if (!item.is_string()) throw core::SchemaError(std::string(what) + ": " + key + " must contain strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Json parse_body(const std::string& body, const char* what) {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw core::SchemaError(std::string(what) + ": reply is not a single JSON document");
    }
    return j;
}

}  // namespace

ChatPart text_part(std::string text) {
    ChatPart p;
    p.kind = ChatPart::Kind::kText;
    p.text = std::move(text);
    return p;
}

ChatPart image_part(core::Bytes png) {
    ChatPart p;
    p.kind = ChatPart::Kind::kImage;
    p.image_png = std::move(png);
    return p;
}

ChatRequest ChatRequest::make(AgentRole role, std::vector<ChatPart> parts) {
    ChatRequest r;
    r.system_text = std::string(system_prompt_for(role));
    r.user_parts = std::move(parts);
    r.response_schema_id = std::string(schema_id_for(role));
    if (!is_shipped_prompt(r.system_text)) {
        throw core::SchemaError("system text is not one of the shipped agent prompts");
    }
    return r;
}

Json response_schema(AgentRole role) {
    auto str = Json{{"type", "string"}};
    auto str_list = Json{{"type", "array"}, {"items", Json{{"type", "string"}}}};
    switch (role) {
        case AgentRole::kAnalyzer:
            return Json{{"type", "object"},
                        {"required", Json::array({"analyzer_reasoning", "original_prompt", "current_prompt",
                                                  "requirements_analysis", "satisfied_requirements",
                                                  "unsatisfied_requirements", "binary_questions", "model_choice"})},
                        {"properties",
                         Json{{"analyzer_reasoning", str},
                              {"original_prompt", str},
                              {"current_prompt", str},
                              {"requirements_analysis", str_list},
                              {"satisfied_requirements", str_list},
                              {"unsatisfied_requirements", str_list},
                              {"binary_questions", str_list},
                              {"model_choice", Json{{"enum", Json::array({"continue", "ending"})}}}}}};
        case AgentRole::kGenRewriter:
            return Json{{"type", "object"},
                        {"required", Json::array({"rewriter_reasoning", "original_prompt", "current_prompt",
                                                  "planned_adjustments", "adjusted_prompt"})},
                        {"properties", Json{{"rewriter_reasoning", str},
                                            {"original_prompt", str},
                                            {"current_prompt", str},
                                            {"planned_adjustments", str_list},
                                            {"adjusted_prompt", str}}}};
        case AgentRole::kEditRewriter:
            return Json{{"type", "object"},
                        {"required", Json::array({"rewriter_reasoning", "original_prompt", "current_prompt",
                                                  "planned_edits", "single_editing_prompt",
                                                  "comprehensive_editing_prompt"})},
                        {"properties", Json{{"rewriter_reasoning", str},
                                            {"original_prompt", str},
                                            {"current_prompt", str},
                                            {"planned_edits", str_list},
                                            {"single_editing_prompt", str},
                                            {"comprehensive_editing_prompt", str}}}};
        case AgentRole::kVerifier:
            return Json{{"type", "object"},
                        {"required", Json::array({"verifier_reasoning", "current_image_caption",
                                                  "questions_answers_and_explanations", "verifier_summary",
                                                  "all_satisfied"})},
                        {"properties",
                         Json{{"verifier_reasoning", str},
                              {"current_image_caption", str},
                              {"questions_answers_and_explanations",
                               Json{{"type", "array"},
                                    {"items", Json{{"type", "array"},
                                                   {"minItems", 3},
                                                   {"maxItems", 3},
                                                   {"prefixItems",
                                                    Json::array({str, Json{{"enum", Json::array({"Yes", "No"})}},
                                                                 str})}}}}},
                              {"verifier_summary", str},
                              {"all_satisfied", Json{{"type", "boolean"}}}}}};
    }
    return Json::object();
}

ChatRequest render_analyzer_request(const std::string& user_prompt,
                                    const std::optional<BestContext>& global_best,
                                    const std::optional<RoundBestExtras>& round_best_extras, int round,
                                    const core::ImageStore& store) {
    const std::string current_prompt = global_best ? global_best->prompt : user_prompt;
    std::string text = "role: analyzer\n";
    text += "round: " + std::to_string(round) + "\n";
    text += "original_prompt: " + quoted(user_prompt) + "\n";
    text += "current_prompt: " + quoted(current_prompt);
    if (global_best && global_best->feedback) {
        text += "\ncurrent_verifier_output: " + Json(*global_best->feedback).dump();
    }
    if (round_best_extras) {
        text += "\nreference_prompt: " + quoted(round_best_extras->prompt);
        text += "\nreference_verifier_output: " + Json(round_best_extras->feedback).dump();
    }
    std::vector<ChatPart> parts;
    parts.push_back(text_part(std::move(text)));
    if (global_best && global_best->image) {
        parts.push_back(image_part(store.get(global_best->image->content_id)));
    }
    return ChatRequest::make(AgentRole::kAnalyzer, std::move(parts));
}

namespace {

ChatRequest render_rewrite_request(AgentRole role, const std::string& user_prompt,
                                   const std::string& current_prompt,
                                   const std::optional<core::ImageRef>& best_image, int round,
                                   const std::vector<std::string>& satisfied,
                                   const std::vector<std::string>& unsatisfied, const core::ImageStore& store) {
    std::string text = std::string("role: ") + to_string(role) + "\n";
    text += "round: " + std::to_string(round) + "\n";
    text += "original_prompt: " + quoted(user_prompt) + "\n";
    text += "current_prompt: " + quoted(current_prompt) + "\n";
    text += "satisfied_requirements: " + Json(satisfied).dump() + "\n";
    text += "unsatisfied_requirements: " + Json(unsatisfied).dump();
    std::vector<ChatPart> parts;
    parts.push_back(text_part(std::move(text)));
    if (best_image) parts.push_back(image_part(store.get(best_image->content_id)));
    return ChatRequest::make(role, std::move(parts));
}

}  // namespace

ChatRequest render_gen_rewrite_request(const std::string& user_prompt, const std::string& current_prompt,
                                       const std::optional<core::ImageRef>& best_image, int round,
                                       const std::vector<std::string>& satisfied,
                                       const std::vector<std::string>& unsatisfied,
                                       const core::ImageStore& store) {
    return render_rewrite_request(AgentRole::kGenRewriter, user_prompt, current_prompt, best_image, round,
                                  satisfied, unsatisfied, store);
}

ChatRequest render_edit_rewrite_request(const std::string& user_prompt, const std::string& current_prompt,
                                        const core::ImageRef& best_image, int round,
                                        const std::vector<std::string>& satisfied,
                                        const std::vector<std::string>& unsatisfied,
                                        const core::ImageStore& store) {
    return render_rewrite_request(AgentRole::kEditRewriter, user_prompt, current_prompt, best_image, round,
                                  satisfied, unsatisfied, store);
}

ChatRequest render_verifier_request(const core::ImageRef& round_best_image,
                                    const std::optional<std::string>& evidence_text,
                                    const std::vector<core::BinaryQuestion>& questions,
                                    const core::ImageStore& store) {
    std::vector<std::string> question_texts;
    question_texts.reserve(questions.size());
    for (const core::BinaryQuestion& q : questions) question_texts.push_back(q.text);
    std::string text = "role: verifier\n";
    text += "binary_questions: " + Json(question_texts).dump();
    std::vector<ChatPart> parts;
    parts.push_back(text_part(std::move(text)));
    if (evidence_text) parts.push_back(text_part(*evidence_text));
    parts.push_back(image_part(store.get(round_best_image.content_id)));
    return ChatRequest::make(AgentRole::kVerifier, std::move(parts));
}

core::AnalyzerOutput parse_analyzer_reply(const std::string& body, int round) {
    const Json j = parse_body(body, "analyzer");
    core::AnalyzerOutput out;
    out.reasoning = require_field(j, "analyzer_reasoning", Json::value_t::string, "analyzer").get<std::string>();
    out.original_prompt_echo =
        require_field(j, "original_prompt", Json::value_t::string, "analyzer").get<std::string>();
    out.current_prompt_echo =
        require_field(j, "current_prompt", Json::value_t::string, "analyzer").get<std::string>();

    const auto requirements = string_list(j, "requirements_analysis", "analyzer");
    const auto satisfied = string_list(j, "satisfied_requirements", "analyzer");
    const auto unsatisfied = string_list(j, "unsatisfied_requirements", "analyzer");
    const auto questions = string_list(j, "binary_questions", "analyzer");
    if (requirements.empty()) throw core::SchemaError("analyzer: requirements_analysis is empty");
    if (questions.size() != requirements.size()) {
        throw core::SchemaError("analyzer: question/requirement count mismatch");
    }

    std::map<std::string, int> index_of;
    for (std::size_t i = 0; i < requirements.size(); ++i) {
        const std::string& text = requirements[i];
        if (text.empty()) throw core::SchemaError("analyzer: requirement text is empty");
        if (questions[i].empty()) throw core::SchemaError("analyzer: binary question text is empty");
        if (!index_of.emplace(text, static_cast<int>(i)).second) {
            throw core::SchemaError("analyzer: duplicate requirement text");
        }
        out.checklist.requirements.push_back({static_cast<int>(i), text, core::classify_major(text)});
        out.checklist.questions.push_back({static_cast<int>(i), questions[i]});
    }
    auto to_indices = [&](const std::vector<std::string>& texts, const char* which) {
        std::set<int> indices;
        for (const std::string& t : texts) {
            auto it = index_of.find(t);
            if (it == index_of.end()) {
                throw core::SchemaError(std::string("analyzer: ") + which +
                                        " entry is not in requirements_analysis");
            }
            indices.insert(it->second);
        }
        return indices;
    };
    out.checklist.satisfied = to_indices(satisfied, "satisfied_requirements");
    out.checklist.unsatisfied = to_indices(unsatisfied, "unsatisfied_requirements");

    const std::string choice = require_field(j, "model_choice", Json::value_t::string, "analyzer").get<std::string>();
    if (choice == "ending") {
        out.decision = core::AnalyzerDecision::kEnd;
    } else if (choice == "continue") {
        out.decision = core::AnalyzerDecision::kContinue;
    } else {
        throw core::SchemaError("analyzer: model_choice must be \"continue\" or \"ending\"");
    }

    core::validate_checklist(out.checklist, round);
    return out;
}

core::GenRewriteOutput parse_gen_rewrite_reply(const std::string& body, const std::string& current_prompt) {
    const Json j = parse_body(body, "gen_rewriter");
    core::GenRewriteOutput out;
    out.reasoning = require_field(j, "rewriter_reasoning", Json::value_t::string, "gen_rewriter").get<std::string>();
    out.planned_adjustments = string_list(j, "planned_adjustments", "gen_rewriter");
    out.adjusted_prompt =
        require_field(j, "adjusted_prompt", Json::value_t::string, "gen_rewriter").get<std::string>();
    if (out.planned_adjustments.empty()) throw core::SchemaError("gen_rewriter: planned_adjustments is empty");
    if (out.adjusted_prompt.empty()) throw core::SchemaError("gen_rewriter: adjusted_prompt is empty");
    if (out.adjusted_prompt == current_prompt) {
        throw UnchangedPromptError("gen_rewriter: adjusted_prompt equals current_prompt");
    }
    return out;
}

core::EditRewriteOutput parse_edit_rewrite_reply(const std::string& body) {
    const Json j = parse_body(body, "edit_rewriter");
    core::EditRewriteOutput out;
    out.reasoning = require_field(j, "rewriter_reasoning", Json::value_t::string, "edit_rewriter").get<std::string>();
    out.planned_edits = string_list(j, "planned_edits", "edit_rewriter");
    out.top_edit =
        require_field(j, "single_editing_prompt", Json::value_t::string, "edit_rewriter").get<std::string>();
    out.comprehensive_edit =
        require_field(j, "comprehensive_editing_prompt", Json::value_t::string, "edit_rewriter").get<std::string>();
    if (out.planned_edits.empty()) throw core::SchemaError("edit_rewriter: planned_edits is empty");
    for (const std::string& e : out.planned_edits) {
        if (e.empty()) throw core::SchemaError("edit_rewriter: planned edit text is empty");
    }
    if (out.top_edit.empty()) throw core::SchemaError("edit_rewriter: single_editing_prompt is empty");
    if (out.comprehensive_edit.empty()) {
        throw core::SchemaError("edit_rewriter: comprehensive_editing_prompt is empty");
    }
    return out;  // random_edit stays unset; the refinement module fills it
}

core::VerifierOutput parse_verifier_reply(const std::string& body,
                                          const std::vector<core::BinaryQuestion>& questions) {
    const Json j = parse_body(body, "verifier");
    core::VerifierOutput out;
    out.reasoning = require_field(j, "verifier_reasoning", Json::value_t::string, "verifier").get<std::string>();
    out.image_caption =
        require_field(j, "current_image_caption", Json::value_t::string, "verifier").get<std::string>();
    out.summary = require_field(j, "verifier_summary", Json::value_t::string, "verifier").get<std::string>();
    out.all_satisfied = require_field(j, "all_satisfied", Json::value_t::boolean, "verifier").get<bool>();

    const Json& rows = require_field(j, "questions_answers_and_explanations", Json::value_t::array, "verifier");
    if (rows.size() != questions.size()) {
        throw core::SchemaError("verifier: triplet count does not match the binary question count");
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Json& row = rows[k];
        if (!row.is_array() || row.size() != 3 || !row[0].is_string() || !row[1].is_string() ||
            !row[2].is_string()) {
            throw core::SchemaError("verifier: each triplet must be [question, Yes/No, explanation]");
        }
        core::VerificationTriplet t;
        t.question = row[0].get<std::string>();
        if (t.question != questions[k].text) {
            throw core::SchemaError("verifier: triplet question does not match the question at its position");
        }
        const std::string a = row[1].get<std::string>();
        if (a == "Yes") {
            t.answer = core::Answer::kYes;
        } else if (a == "No") {
            t.answer = core::Answer::kNo;
        } else {
            throw core::SchemaError("verifier: answer must be \"Yes\" or \"No\"");
        }
        t.explanation = row[2].get<std::string>();
        out.triplets.push_back(std::move(t));
    }
    return out;
}

AgentClient::AgentClient(ChatBackend& backend, const core::ImageStore& store, int retry_limit)
    : backend_(backend), store_(store), retry_limit_(retry_limit < 0 ? 0 : retry_limit) {}

template <typename Output>
Output AgentClient::call(AgentRole role, ChatRequest request,
                         const std::function<Output(const std::string&)>& parse, int difference_retries) {
    AgentCallRecord record;
    record.role = role;
    const int schema_budget = std::min(2, retry_limit_);
    const int diff_budget = std::min(difference_retries, retry_limit_);
    int retries_used = 0;
    int diff_used = 0;
    std::string last_error;

    for (;;) {
        ++record.attempts;
        const auto started = std::chrono::steady_clock::now();
        try {
            const std::string body = backend_.complete(request);
            record.latency_ms +=
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            Output out = parse(body);
            record.ok = true;
            if (record_) record_(record, core::Json(out));
            return out;
        } catch (const UnchangedPromptError& e) {
            record.latency_ms +=
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            last_error = e.what();
            if (diff_used >= diff_budget || retries_used >= retry_limit_) break;
            ++diff_used;
            ++retries_used;
            request.user_parts.push_back(text_part(
                "The adjusted_prompt you returned equals the current_prompt. It must be significantly "
                "different from the current_prompt; reply again with a meaningfully different adjusted_prompt."));
        } catch (const core::SchemaError& e) {
            record.latency_ms +=
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            last_error = e.what();
            if (retries_used >= schema_budget) break;
            ++retries_used;
            request.user_parts.push_back(text_part(
                std::string("Your previous reply violated the output schema: ") + e.what() +
                ". Reply again with a single JSON document matching the " + request.response_schema_id +
                " schema exactly."));
        } catch (const core::TransportError& e) {
            record.latency_ms +=
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
            last_error = e.what();
            if (retries_used >= retry_limit_) {
                record.error = last_error;
                if (record_) record_(record, core::Json{{"error", last_error}});
                throw;
            }
            ++retries_used;
        }
    }
    record.error = last_error;
    if (record_) record_(record, core::Json{{"error", last_error}});
    throw core::SchemaError(std::string(to_string(role)) + " reply rejected after " +
                            std::to_string(record.attempts) + " attempts: " + last_error);
}

core::AnalyzerOutput AgentClient::analyze(const std::string& user_prompt,
                                          const std::optional<BestContext>& global_best,
                                          const std::optional<RoundBestExtras>& extras, int round) {
    ChatRequest request = render_analyzer_request(user_prompt, global_best, extras, round, store_);
    return call<core::AnalyzerOutput>(
        AgentRole::kAnalyzer, std::move(request),
        [round](const std::string& body) { return parse_analyzer_reply(body, round); }, 0);
}

core::GenRewriteOutput AgentClient::rewrite_generation(const std::string& user_prompt,
                                                       const std::string& current_prompt,
                                                       const std::optional<core::ImageRef>& best_image, int round,
                                                       const std::vector<std::string>& satisfied,
                                                       const std::vector<std::string>& unsatisfied) {
    ChatRequest request =
        render_gen_rewrite_request(user_prompt, current_prompt, best_image, round, satisfied, unsatisfied, store_);
    return call<core::GenRewriteOutput>(
        AgentRole::kGenRewriter, std::move(request),
        [current_prompt](const std::string& body) { return parse_gen_rewrite_reply(body, current_prompt); }, 1);
}

core::EditRewriteOutput AgentClient::rewrite_editing(const std::string& user_prompt,
                                                     const std::string& current_prompt,
                                                     const core::ImageRef& best_image, int round,
                                                     const std::vector<std::string>& satisfied,
                                                     const std::vector<std::string>& unsatisfied) {
    ChatRequest request =
        render_edit_rewrite_request(user_prompt, current_prompt, best_image, round, satisfied, unsatisfied, store_);
    return call<core::EditRewriteOutput>(
        AgentRole::kEditRewriter, std::move(request),
        [](const std::string& body) { return parse_edit_rewrite_reply(body); }, 0);
}

core::VerifierOutput AgentClient::verify(const core::ImageRef& round_best_image,
                                         const std::optional<std::string>& evidence_text,
                                         const std::vector<core::BinaryQuestion>& questions,
                                         bool* consistency_corrected) {
    if (questions.empty()) throw core::SchemaError("verifier requires a nonempty question list");
    ChatRequest request = render_verifier_request(round_best_image, evidence_text, questions, store_);
    core::VerifierOutput raw = call<core::VerifierOutput>(
        AgentRole::kVerifier, std::move(request),
        [&questions](const std::string& body) { return parse_verifier_reply(body, questions); }, 0);
    return core::enforce_verifier_consistency(std::move(raw), consistency_corrected);
}

}  // namespace raise::agents
