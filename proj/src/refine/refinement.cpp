#include "raise/refine/refinement.hpp"

#include <algorithm>

#include "raise/core/errors.hpp"

namespace raise::refine {

using core::Candidate;
using core::CandidateKind;

int ActionPlan::total() const {
    int n = 0;
    for (const auto& [kind, count] : counts) n += count;
    return n;
}

ActionPlan schedule_actions(int round, const core::RunConfig& config) {
    if (round < 1 || round > config.k_max) {
        throw core::RefinementError("schedule_actions: round out of range");
    }
    ActionPlan plan;
    plan.round = round;
    if (round <= config.k_min) {
        plan.counts[CandidateKind::kResample] = config.early_resample;
        plan.counts[CandidateKind::kRewrite] = config.early_rewrite;
    } else if (config.enable_editing) {
        plan.counts[CandidateKind::kRewrite] = config.late_rewrite;
        plan.counts[CandidateKind::kEditTop] = 1;
        plan.counts[CandidateKind::kEditRandom] = 1;
        plan.counts[CandidateKind::kEditComp] = 1;
    } else {
        // w/o-editing ablation: the edit triple's budget becomes rewrites.
        plan.counts[CandidateKind::kRewrite] = config.late_rewrite + 3;
    }
    return plan;
}

std::uint64_t derive_seed(std::uint64_t run_seed, int round, int slot) {
    return core::derive_seed64(run_seed, static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(slot));
}

core::SplitMixStream random_edit_stream(std::uint64_t run_seed, int round) {
    const std::uint64_t key =
        core::mix64(core::mix64(run_seed) ^ core::fnv1a64("random_edit") ^ static_cast<std::uint64_t>(round));
    return core::SplitMixStream(key);
}

namespace {

Candidate base_candidate(int round, int slot, const core::RunConfig& config) {
    Candidate c;
    c.round = round;
    c.slot = slot;
    c.seed = derive_seed(config.run_seed, round, slot);
    return c;
}

}  // namespace

std::vector<Candidate> make_resample_candidates(const std::string& user_prompt, int count, int round,
                                                int first_slot, const core::RunConfig& config) {
    std::vector<Candidate> out;
    for (int i = 0; i < count; ++i) {
        Candidate c = base_candidate(round, first_slot + i, config);
        c.prompt = user_prompt;
        c.kind = CandidateKind::kResample;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Candidate> make_rewrite_candidates(const std::string& rewritten_prompt, int count, int round,
                                               int first_slot, const core::RunConfig& config) {
    if (count > 0 && rewritten_prompt.empty()) {
        throw core::RefinementError("rewrite candidates need a nonempty rewritten prompt");
    }
    std::vector<Candidate> out;
    for (int i = 0; i < count; ++i) {
        Candidate c = base_candidate(round, first_slot + i, config);
        c.prompt = rewritten_prompt;
        c.kind = CandidateKind::kRewrite;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Candidate> make_edit_candidates(core::EditRewriteOutput& edit_output,
                                            const core::ImageRef& parent_image, int round, int first_slot,
                                            const core::RunConfig& config, core::SplitMixStream& rng_stream) {
    if (edit_output.planned_edits.empty()) {
        throw core::RefinementError("edit candidates need a nonempty planned_edits list");
    }
    // Draw the random edit uniformly from the planned edits excluding the top
    // edit; when the top edit is the only plan entry it is reused.
    std::vector<std::string> pool;
    for (const std::string& e : edit_output.planned_edits) {
        if (e != edit_output.top_edit) pool.push_back(e);
    }
    if (pool.empty()) pool = edit_output.planned_edits;
    edit_output.random_edit = pool[rng_stream.next_below(pool.size())];

    const std::array<std::pair<CandidateKind, const std::string*>, 3> triple = {{
        {CandidateKind::kEditTop, &edit_output.top_edit},
        {CandidateKind::kEditRandom, &edit_output.random_edit},
        {CandidateKind::kEditComp, &edit_output.comprehensive_edit},
    }};
    std::vector<Candidate> out;
    int slot = first_slot;
    for (const auto& [kind, prompt] : triple) {
        Candidate c = base_candidate(round, slot++, config);
        c.prompt = *prompt;
        c.kind = kind;
        c.reference = parent_image;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Candidate> build_population(const ActionPlan& plan, const PopulationContext& ctx,
                                        const core::RunConfig& config, core::SplitMixStream& rng_stream) {
    std::vector<Candidate> population;
    int slot = 0;

    const auto count_of = [&](CandidateKind kind) {
        auto it = plan.counts.find(kind);
        return it == plan.counts.end() ? 0 : it->second;
    };

    const int n_resample = count_of(CandidateKind::kResample);
    if (n_resample > 0) {
        auto cs = make_resample_candidates(ctx.user_prompt, n_resample, plan.round, slot, config);
        slot += n_resample;
        population.insert(population.end(), cs.begin(), cs.end());
    }

    const int n_rewrite = count_of(CandidateKind::kRewrite);
    if (n_rewrite > 0) {
        if (!ctx.gen_rewrite || !ctx.gen_rewrite->has_value()) {
            throw core::RefinementError("plan demands rewrite candidates but no rewrite output is present");
        }
        auto cs = make_rewrite_candidates((*ctx.gen_rewrite)->adjusted_prompt, n_rewrite, plan.round, slot, config);
        slot += n_rewrite;
        population.insert(population.end(), cs.begin(), cs.end());
    }

    const bool wants_edits = count_of(CandidateKind::kEditTop) > 0 ||
                             count_of(CandidateKind::kEditRandom) > 0 ||
                             count_of(CandidateKind::kEditComp) > 0;
    if (wants_edits) {
        if (!ctx.edit_rewrite || !ctx.edit_rewrite->has_value()) {
            throw core::RefinementError("plan demands edit candidates but no edit-rewrite output is present");
        }
        if (!ctx.parent_image) {
            throw core::RefinementError("plan demands edit candidates but no parent image is present");
        }
        auto cs = make_edit_candidates(**ctx.edit_rewrite, *ctx.parent_image, plan.round, slot, config, rng_stream);
        slot += static_cast<int>(cs.size());
        population.insert(population.end(), cs.begin(), cs.end());
    }

    if (static_cast<int>(population.size()) != plan.total()) {
        throw core::RefinementError("population size does not match the action plan");
    }
    return population;
}

}  // namespace raise::refine
