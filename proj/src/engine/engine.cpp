#include "raise/engine/engine.hpp"

#include <algorithm>
#include <cmath>

#include "raise/core/errors.hpp"
#include "raise/refine/refinement.hpp"

namespace raise::engine {

using core::Json;

ScoreOutcome score_candidates(const std::vector<exec::ExecutionResult>& results,
                              const std::vector<core::Candidate>& candidates, const std::string& user_prompt,
                              ScorerBackend& scorer, const core::ImageStore& store) {
    if (results.size() != candidates.size()) {
        throw core::ExecutionError("execution results do not align with the candidate population");
    }
    ScoreOutcome outcome;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const exec::ExecutionResult& r = results[i];
        if (!r.output) continue;  // execution failures are not scored
        double fitness = 0.0;
        try {
            fitness = scorer.score(store.get(r.output->content_id), user_prompt);
        } catch (const std::exception&) {
            outcome.score_failures.push_back(r.candidate);
            continue;
        }
        if (!std::isfinite(fitness)) {
            outcome.score_failures.push_back(r.candidate);
            continue;
        }
        outcome.scored.push_back({candidates[i], *r.output, fitness});
    }
    return outcome;
}

SelectedBests select_bests(const std::vector<core::ScoredCandidate>& scored,
                           const std::optional<std::pair<core::CandidateId, double>>& prior_global_best) {
    if (scored.empty()) throw core::ExecutionError("select_bests called with no scored candidates");

    const core::ScoredCandidate* best = &scored.front();
    for (const core::ScoredCandidate& s : scored) {
        // strict > keeps the earliest (lowest-slot) maximum
        if (s.fitness > best->fitness ||
            (s.fitness == best->fitness && s.candidate.id() < best->candidate.id())) {
            best = &s;
        }
    }

    SelectedBests out;
    out.round_best = best->candidate.id();
    out.round_best_fitness = best->fitness;
    if (prior_global_best && prior_global_best->second >= best->fitness) {
        out.global_best = prior_global_best->first;       // earlier round wins ties
        out.global_best_fitness = prior_global_best->second;
    } else {
        out.global_best = out.round_best;
        out.global_best_fitness = out.round_best_fitness;
    }
    return out;
}

std::optional<core::TerminationReason> decide_stop(int round, core::AnalyzerDecision analyzer_decision,
                                                   std::optional<bool> verifier_flag,
                                                   const core::RunConfig& config) {
    if (config.force_rounds > 0) {
        if (verifier_flag.has_value() && round == config.force_rounds) {
            return core::TerminationReason{core::TerminationKind::kMaxRounds, round};
        }
        return std::nullopt;
    }
    if (!verifier_flag.has_value()) {
        if (analyzer_decision == core::AnalyzerDecision::kEnd && round >= config.k_min) {
            return core::TerminationReason{core::TerminationKind::kAnalyzerEnd, round};
        }
        return std::nullopt;
    }
    if (*verifier_flag && round >= config.k_min) {
        return core::TerminationReason{core::TerminationKind::kVerifierAllSatisfied, round};
    }
    if (round == config.k_max) {
        return core::TerminationReason{core::TerminationKind::kMaxRounds, round};
    }
    return std::nullopt;
}

void validate_run_config(const core::RunConfig& config) {
    if (config.k_min < 1) throw core::ConfigError("k_min must be at least 1");
    if (config.k_min > config.k_max) throw core::ConfigError("k_min must not exceed k_max");
    if (config.early_resample < 0 || config.early_rewrite < 0 || config.late_rewrite < 0) {
        throw core::ConfigError("candidate counts must be non-negative");
    }
    if (config.early_resample + config.early_rewrite <= 0) {
        throw core::ConfigError("early rounds need at least one candidate");
    }
    if (config.parallelism < 1) throw core::ConfigError("parallelism must be at least 1");
    if (config.image_width <= 0 || config.image_height <= 0) {
        throw core::ConfigError("image dimensions must be positive");
    }
    if (config.steps < 1) throw core::ConfigError("steps must be at least 1");
    if (config.timeout_s <= 0) throw core::ConfigError("timeout_s must be positive");
    if (config.retry_limit < 0) throw core::ConfigError("retry_limit must be non-negative");
    if (config.force_rounds < 0 || config.force_rounds > config.k_max) {
        throw core::ConfigError("force_rounds must lie in [0, k_max]");
    }
    if (config.backend_profile != "sim" && config.backend_profile != "real") {
        throw core::ConfigError("backend_profile must be \"sim\" or \"real\"");
    }
}

Engine::Engine(core::RunConfig config, EngineBackends backends, core::ImageStore& store, ops::TraceSink* trace)
    : config_(std::move(config)), backends_(backends), store_(store), trace_(trace) {
    validate_run_config(config_);
    if (!backends_.chat || !backends_.generator || !backends_.editor || !backends_.scorer) {
        throw core::ConfigError("engine requires chat, generator, editor and scorer backends");
    }
}

void Engine::emit(const std::string& kind, std::optional<int> round, Json payload) {
    if (trace_) trace_->emit(kind, round, std::move(payload));
}

core::RunState Engine::run(const std::string& user_prompt) {
    core::RunState state;
    state.user_prompt = user_prompt;
    state.config = config_;

    emit("run_start", std::nullopt, Json{{"user_prompt", user_prompt}, {"config", config_}});

    agents::AgentClient agent(*backends_.chat, store_, config_.retry_limit);
    core::RoundRecord* current_record = nullptr;
    int current_round = 0;
    agent.set_record_callback([&](const agents::AgentCallRecord& record, const Json& outcome) {
        if (current_record) ++current_record->agent_calls;
        ++state.total_agent_calls;
        emit("agent_call", current_round,
             Json{{"role", agents::to_string(record.role)},
                  {"attempts", record.attempts},
                  {"ok", record.ok},
                  {"latency_ms", record.latency_ms},
                  {"outcome", outcome}});
    });

    // Parent context (the global best candidate); round 1 starts from the
    // bare user prompt with no image and no feedback.
    std::optional<core::CandidateId> global_best_id;
    double global_best_fitness = 0.0;
    std::string global_best_prompt = user_prompt;
    std::optional<core::ImageRef> global_best_image;
    std::optional<core::VerifierOutput> global_best_feedback;
    std::optional<agents::RoundBestExtras> extras;

    const int max_rounds = config_.force_rounds > 0 ? config_.force_rounds : config_.k_max;

    auto finalize = [&](core::TerminationReason reason) {
        state.termination = reason;
        state.global_best = global_best_id;
        Json payload{{"termination", reason},
                     {"total_samples", state.total_samples},
                     {"total_agent_calls", state.total_agent_calls}};
        if (global_best_id) {
            payload["global_best"] = *global_best_id;
            payload["final_content_id"] = global_best_image ? global_best_image->content_id : "";
            payload["final_fitness"] = global_best_fitness;
        } else {
            payload["global_best"] = nullptr;
        }
        emit("run_end", std::nullopt, payload);
        return state;
    };

    for (int round = 1; round <= max_rounds; ++round) {
        core::RoundRecord rec;
        rec.round = round;
        current_record = &rec;
        current_round = round;
        emit("round_start", round, Json::object());

        try {
            // (1) requirement analysis
            std::optional<agents::BestContext> best_ctx;
            if (round > 1) {
                best_ctx = agents::BestContext{global_best_prompt, global_best_image, global_best_feedback};
            }
            rec.analyzer = agent.analyze(user_prompt, best_ctx, extras, round);

            // stop on the analyzer decision before any candidate is built;
            // the trailing record carries 1 agent call and 0 samples
            if (auto stop = decide_stop(round, rec.analyzer.decision, std::nullopt, config_)) {
                current_record = nullptr;
                state.rounds.push_back(rec);
                emit("round_end", round,
                     Json{{"agent_calls", rec.agent_calls}, {"samples", rec.samples}, {"stopped", true}});
                return finalize(*stop);
            }

            // (2) schedule + rewriters
            refine::ActionPlan plan = refine::schedule_actions(round, config_);

            std::vector<std::string> satisfied_texts;
            std::vector<std::string> unsatisfied_texts;
            for (const core::Requirement& r : rec.analyzer.checklist.requirements) {
                if (rec.analyzer.checklist.satisfied.count(r.index)) {
                    satisfied_texts.push_back(r.text);
                } else {
                    unsatisfied_texts.push_back(r.text);
                }
            }

            rec.gen_rewrite = agent.rewrite_generation(user_prompt, global_best_prompt, global_best_image, round,
                                                       satisfied_texts, unsatisfied_texts);

            const bool plan_has_edits = plan.counts.count(core::CandidateKind::kEditTop) > 0;
            std::string edit_fallback_reason;
            if (plan_has_edits) {
                // a terminally failed edit rewrite degrades the edit triple
                // to three extra rewrites so the round keeps its sample count
                try {
                    rec.edit_rewrite = agent.rewrite_editing(user_prompt, global_best_prompt, *global_best_image,
                                                             round, satisfied_texts, unsatisfied_texts);
                } catch (const core::SchemaError& e) {
                    edit_fallback_reason = e.what();
                } catch (const core::TransportError& e) {
                    edit_fallback_reason = e.what();
                }
                if (!edit_fallback_reason.empty()) {
                    plan.counts.erase(core::CandidateKind::kEditTop);
                    plan.counts.erase(core::CandidateKind::kEditRandom);
                    plan.counts.erase(core::CandidateKind::kEditComp);
                    plan.counts[core::CandidateKind::kRewrite] += 3;
                }
            }

            // (3) candidate mutation
            core::SplitMixStream rng = refine::random_edit_stream(config_.run_seed, round);
            refine::PopulationContext ctx;
            ctx.user_prompt = user_prompt;
            ctx.gen_rewrite = &rec.gen_rewrite;
            ctx.edit_rewrite = &rec.edit_rewrite;
            ctx.parent_image = global_best_image;
            rec.candidates = refine::build_population(plan, ctx, config_, rng);

            Json plan_counts = Json::object();
            for (const auto& [kind, count] : plan.counts) plan_counts[core::to_string(kind)] = count;
            Json population_payload{{"plan", plan_counts}, {"candidates", rec.candidates}};
            if (!edit_fallback_reason.empty()) population_payload["edit_fallback"] = edit_fallback_reason;
            emit("population_built", round, population_payload);

            // (4) candidate execution
            std::vector<exec::ExecutionResult> results;
            bool all_failed = false;
            std::string failure_note;
            try {
                results = exec::execute_population(rec.candidates, config_, *backends_.generator,
                                                   *backends_.editor, store_);
            } catch (const exec::PopulationError& e) {
                results = e.results;
                all_failed = true;
                failure_note = e.what();
            }
            rec.samples = static_cast<int>(rec.candidates.size());  // attempted executions
            state.total_samples += rec.samples;
            for (const exec::ExecutionResult& r : results) {
                Json payload{{"round", r.candidate.round},
                             {"slot", r.candidate.slot},
                             {"ok", r.output.has_value()},
                             {"duration_ms", r.duration_ms}};
                if (r.output) {
                    payload["content_id"] = r.output->content_id;
                } else {
                    payload["failure"] = r.failure;
                }
                emit("candidate_executed", round, payload);
            }
            if (all_failed) {
                current_record = nullptr;
                state.rounds.push_back(rec);
                emit("round_end", round,
                     Json{{"agent_calls", rec.agent_calls}, {"samples", rec.samples}, {"error", failure_note}});
                return finalize({core::TerminationKind::kError, round});
            }

            // (5) fitness scoring against the original user prompt
            ScoreOutcome scores = score_candidates(results, rec.candidates, user_prompt, *backends_.scorer, store_);
            rec.scored = scores.scored;
            {
                Json rows = Json::array();
                for (const core::ScoredCandidate& s : rec.scored) {
                    rows.push_back(Json{{"slot", s.candidate.slot}, {"fitness", s.fitness}});
                }
                emit("candidates_scored", round, Json{{"scores", rows}, {"failures", scores.score_failures}});
            }
            if (rec.scored.empty()) {
                current_record = nullptr;
                state.rounds.push_back(rec);
                emit("round_end", round,
                     Json{{"agent_calls", rec.agent_calls},
                          {"samples", rec.samples},
                          {"error", "no candidate could be scored"}});
                return finalize({core::TerminationKind::kError, round});
            }

            // (6) selection
            std::optional<std::pair<core::CandidateId, double>> prior;
            if (global_best_id) prior = std::make_pair(*global_best_id, global_best_fitness);
            const SelectedBests bests = select_bests(rec.scored, prior);
            rec.round_best = bests.round_best;
            emit("round_best_selected", round,
                 Json{{"round_best", bests.round_best},
                      {"fitness", bests.round_best_fitness},
                      {"global_best", bests.global_best},
                      {"global_best_fitness", bests.global_best_fitness}});

            const core::ScoredCandidate* round_best = nullptr;
            for (const core::ScoredCandidate& s : rec.scored) {
                if (s.candidate.id() == bests.round_best) round_best = &s;
            }

            // (7) grounding of the round-best image
            ground::AcquireResult acquired =
                ground::acquire_grounding(round_best->output, config_, backends_.grounding, store_);
            rec.evidence = acquired.evidence;
            emit("grounding_acquired", round,
                 Json{{"ungrounded", !acquired.evidence.has_value()}, {"notes", acquired.notes}});

            // (8) verification of the round best (stored even when it scores
            // below the global best)
            std::optional<std::string> evidence_text;
            if (rec.evidence) evidence_text = ground::serialize_evidence(*rec.evidence);
            bool corrected = false;
            rec.verifier =
                agent.verify(round_best->output, evidence_text, rec.analyzer.checklist.questions, &corrected);
            emit("verifier_result", round,
                 Json{{"all_satisfied", rec.verifier->all_satisfied},
                      {"consistency_corrected", corrected},
                      {"ungrounded", !rec.evidence.has_value()},
                      {"verifier", *rec.verifier}});

            // promote the new global best; its feedback is this round's
            // verification. An older global best keeps its stored feedback.
            if (bests.global_best == bests.round_best) {
                global_best_id = bests.global_best;
                global_best_fitness = bests.global_best_fitness;
                global_best_prompt = round_best->candidate.prompt;
                global_best_image = round_best->output;
                global_best_feedback = rec.verifier;
            }
            state.global_best = global_best_id;

            if (bests.round_best != bests.global_best) {
                extras = agents::RoundBestExtras{round_best->candidate.prompt, *rec.verifier};
            } else {
                extras.reset();
            }

            current_record = nullptr;
            state.rounds.push_back(rec);
            emit("round_end", round, Json{{"agent_calls", rec.agent_calls}, {"samples", rec.samples}});

            if (auto stop = decide_stop(round, rec.analyzer.decision, rec.verifier->all_satisfied, config_)) {
                return finalize(*stop);
            }
        } catch (const std::exception& e) {
            current_record = nullptr;
            state.rounds.push_back(rec);
            emit("round_end", round,
                 Json{{"agent_calls", rec.agent_calls}, {"samples", rec.samples}, {"error", e.what()}});
            return finalize({core::TerminationKind::kError, round});
        }
    }

    // only reachable when max_rounds executes its verifier stop; kept defensive
    return finalize({core::TerminationKind::kMaxRounds, max_rounds});
}

}  // namespace raise::engine
