#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "raise/core/types.hpp"
#include "raise/core/util.hpp"

namespace raise::refine {

/// Per-round action schedule: candidate kind -> count.
struct ActionPlan {
    int round = 0;
    std::map<core::CandidateKind, int> counts;

    int total() const;
    bool operator==(const ActionPlan&) const = default;
};

/// Early rounds (round <= k_min) resample + rewrite; later rounds rewrite +
/// the edit triple. With editing disabled the edit budget moves to rewrite.
ActionPlan schedule_actions(int round, const core::RunConfig& config);

/// seed = mix64(mix64(run_seed) XOR ((round << 32) | slot)); deterministic
/// and collision-free over (round, slot) within a run.
std::uint64_t derive_seed(std::uint64_t run_seed, int round, int slot);

/// Deterministic stream for the random-edit draw, keyed by
/// (run_seed, round, "random_edit").
core::SplitMixStream random_edit_stream(std::uint64_t run_seed, int round);

std::vector<core::Candidate> make_resample_candidates(const std::string& user_prompt, int count, int round,
                                                      int first_slot, const core::RunConfig& config);
std::vector<core::Candidate> make_rewrite_candidates(const std::string& rewritten_prompt, int count, int round,
                                                     int first_slot, const core::RunConfig& config);

/// Exactly three candidates (top/random/comp), all referencing the parent
/// image. random_edit is drawn uniformly from planned_edits excluding the top
/// edit when more than one planned edit exists.
std::vector<core::Candidate> make_edit_candidates(core::EditRewriteOutput& edit_output,
                                                  const core::ImageRef& parent_image, int round, int first_slot,
                                                  const core::RunConfig& config, core::SplitMixStream& rng_stream);

/// Inputs the population builder pulls from agent outputs and the parent.
struct PopulationContext {
    std::string user_prompt;
    std::optional<core::GenRewriteOutput>* gen_rewrite = nullptr;   // read-only use
    std::optional<core::EditRewriteOutput>* edit_rewrite = nullptr; // random_edit filled in place
    std::optional<core::ImageRef> parent_image;
};

/// Builds the full population in fixed slot order:
/// resample < rewrite < edit_top < edit_random < edit_comp.
std::vector<core::Candidate> build_population(const ActionPlan& plan, const PopulationContext& ctx,
                                              const core::RunConfig& config, core::SplitMixStream& rng_stream);

}  // namespace raise::refine
