#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raise/agents/protocol.hpp"
#include "raise/core/json.hpp"
#include "raise/core/types.hpp"
#include "raise/engine/engine.hpp"
#include "raise/exec/execution.hpp"
#include "raise/ground/grounding.hpp"

namespace raise::sim {

/// Hidden requirement-vector world behind the simulated backends.
struct WorldSpec {
    int m = 6;                     // hidden atomic requirements
    double p_resample = 0.3;       // per-requirement satisfaction, resample candidates
    double p_rewrite = 0.5;        // same, rewrite candidates
    double p_edit_target = 0.8;    // targeted edit fixes its requirement
    double p_edit_side = 0.0;      // edit breaks an unrelated satisfied requirement
    double analyzer_recall = 1.0;  // fraction of hidden requirements surfaced
    double verifier_flip = 0.0;    // probability a verifier answer is inverted
    std::uint64_t world_seed = 0;

    bool operator==(const WorldSpec&) const = default;
};

void to_json(core::Json& j, const WorldSpec& v);
void from_json(const core::Json& j, WorldSpec& v);

/// Throws core::ConfigError on out-of-range fields.
void validate_world(const WorldSpec& spec);

/// Deterministic world logic. All randomness is keyed by request content, so
/// concurrent calls and reruns agree.
class SimWorld {
public:
    SimWorld(WorldSpec spec, int k_min);

    const WorldSpec& spec() const { return spec_; }
    int k_min() const { return k_min_; }

    /// Bit k set with probability p_resample (prompt still the user prompt)
    /// or p_rewrite (rewritten prompt), keyed by (world_seed, seed).
    std::vector<bool> generate_bits(const std::string& prompt, std::uint64_t seed) const;

    /// Applies an edit instruction ("set req 3" / "set reqs 1,4") to the
    /// reference bits. Throws core::BackendError on an unparseable instruction.
    std::vector<bool> edit_bits(const std::string& instruction, std::uint64_t seed,
                                const std::vector<bool>& reference) const;

    /// popcount / m.
    double score_bits(const std::vector<bool>& bits) const;

    /// Scripted analyzer/rewriter/verifier replies (wire-schema JSON).
    std::string agent_reply(const agents::ChatRequest& request) const;

    int surfaced_count() const;

    static bool is_rewritten_prompt(const std::string& prompt);
    static std::string rewrite_marker();

private:
    WorldSpec spec_;
    int k_min_;
};

// Backend adapters over one shared world.
class SimGenerator : public exec::GeneratorBackend {
public:
    explicit SimGenerator(const SimWorld& world) : world_(world) {}
    core::Bytes generate(const exec::GenRequest& request) override;

private:
    const SimWorld& world_;
};

class SimEditor : public exec::EditorBackend {
public:
    explicit SimEditor(const SimWorld& world) : world_(world) {}
    core::Bytes edit(const exec::EditRequest& request) override;

private:
    const SimWorld& world_;
};

class SimScorer : public engine::ScorerBackend {
public:
    explicit SimScorer(const SimWorld& world) : world_(world) {}
    double score(const core::Bytes& png, const std::string& user_prompt) override;

private:
    const SimWorld& world_;
};

class SimGrounding : public ground::GroundingBackend {
public:
    explicit SimGrounding(const SimWorld& world) : world_(world) {}
    ground::GroundingReply ground(const core::Bytes& png) override;

private:
    const SimWorld& world_;
};

class SimChat : public agents::ChatBackend {
public:
    explicit SimChat(const SimWorld& world) : world_(world) {}
    std::string complete(const agents::ChatRequest& request) override;

private:
    const SimWorld& world_;
};

/// Owns a world plus the five in-process backends wired for the engine.
struct SimBackends {
    SimBackends(WorldSpec spec, int k_min)
        : world(spec, k_min), generator(world), editor(world), scorer(world), grounding(world), chat(world) {}

    engine::EngineBackends engine_backends(bool with_grounding = true) {
        engine::EngineBackends b;
        b.chat = &chat;
        b.generator = &generator;
        b.editor = &editor;
        b.scorer = &scorer;
        b.grounding = with_grounding ? &grounding : nullptr;
        return b;
    }

    SimWorld world;
    SimGenerator generator;
    SimEditor editor;
    SimScorer scorer;
    SimGrounding grounding;
    SimChat chat;
};

struct ConvergenceReport {
    int trials = 0;
    double satisfied_fraction = 0.0;  // final global best satisfies all m hidden bits
    double mean_rounds = 0.0;         // completed rounds per run
    double mean_samples = 0.0;
    double mean_agent_calls = 0.0;
};

/// Runs the full engine against sim backends `trials` times with run seeds
/// seed_base, seed_base+1, ...
ConvergenceReport run_convergence(const WorldSpec& spec, const core::RunConfig& config, int trials,
                                  std::uint64_t seed_base);

}  // namespace raise::sim
