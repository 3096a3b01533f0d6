#include "raise/ops/run_store.hpp"

#include <fstream>

#include "raise/core/errors.hpp"
#include "raise/engine/engine.hpp"
#include "raise/exec/http_backends.hpp"
#include "raise/ops/trace.hpp"
#include "raise/sim/world.hpp"

namespace raise::ops {

namespace fs = std::filesystem;

std::string run_id_for(const std::string& prompt, std::uint64_t seed) {
    const std::string hash = core::to_hex(core::fnv1a64(prompt));
    return "run_s" + std::to_string(seed) + "_" + hash.substr(8);
}

RunPaths run_paths(const fs::path& out_dir, const std::string& run_id) {
    RunPaths p;
    p.dir = out_dir / run_id;
    p.config_json = p.dir / "config.json";
    p.trace_jsonl = p.dir / "trace.jsonl";
    p.images_dir = p.dir / "images";
    p.final_png = p.dir / "final.png";
    p.summary_json = p.dir / "summary.json";
    return p;
}

RunPaths prepare_run_dir(const fs::path& out_dir, const std::string& run_id) {
    RunPaths p = run_paths(out_dir, run_id);
    fs::create_directories(p.images_dir);
    return p;
}

namespace {

void write_file(const fs::path& path, const core::Bytes& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw core::TraceError("cannot write file: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw core::TraceError("cannot write file: " + path.string());
    out << text;
}

}  // namespace

void persist_run(const RunPaths& paths, const core::RunState& state, const core::ImageStore& store) {
    for (const core::RoundRecord& round : state.rounds) {
        for (const core::ScoredCandidate& s : round.scored) {
            const fs::path name = paths.images_dir / ("r" + std::to_string(s.candidate.round) + "_s" +
                                                      std::to_string(s.candidate.slot) + ".png");
            write_file(name, store.get(s.output.content_id));
        }
    }
    if (state.global_best) {
        for (const core::RoundRecord& round : state.rounds) {
            for (const core::ScoredCandidate& s : round.scored) {
                if (s.candidate.id() == *state.global_best) {
                    write_file(paths.final_png, store.get(s.output.content_id));
                }
            }
        }
    }
    write_text(paths.summary_json, core::Json(state).dump(2) + "\n");
}

RunOutcome run_one(const FullConfig& config, const std::string& prompt, const fs::path& out_dir) {
    const std::string run_id = run_id_for(prompt, config.run.run_seed);
    RunPaths paths = prepare_run_dir(out_dir, run_id);
    write_text(paths.config_json, to_json_document(config).dump(2) + "\n");

    TraceWriter trace(paths.trace_jsonl.string());
    core::ImageStore store;
    core::RunState state;

    if (config.run.backend_profile == "sim") {
        sim::WorldSpec world = config.sim_world.value_or(sim::WorldSpec{});
        sim::SimBackends backends(world, config.run.k_min);
        engine::Engine engine(config.run, backends.engine_backends(config.run.enable_grounding_tools), store,
                              &trace);
        state = engine.run(prompt);
    } else {
        const core::RunConfig& rc = config.run;
        if (rc.generator_url.empty() || rc.editor_url.empty() || rc.agent_url.empty() || rc.scorer_url.empty()) {
            throw core::ConfigError(
                "real backend profile requires generator_url, editor_url, agent_url and scorer_url");
        }
        exec::HttpGenerator generator(rc.generator_url, rc.timeout_s);
        exec::HttpEditor editor(rc.editor_url, rc.timeout_s);
        exec::HttpScorer scorer(rc.scorer_url, rc.timeout_s);
        exec::HttpChat chat(rc.agent_url, rc.timeout_s);
        std::optional<exec::HttpGrounding> grounding;
        if (!rc.grounding_url.empty()) grounding.emplace(rc.grounding_url, rc.timeout_s);

        engine::EngineBackends backends;
        backends.chat = &chat;
        backends.generator = &generator;
        backends.editor = &editor;
        backends.scorer = &scorer;
        backends.grounding = grounding ? &*grounding : nullptr;
        engine::Engine engine(rc, backends, store, &trace);
        state = engine.run(prompt);
    }

    persist_run(paths, state, store);
    return RunOutcome{std::move(state), std::move(paths)};
}

}  // namespace raise::ops
