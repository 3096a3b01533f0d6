#include "raise/exec/execution.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "raise/core/errors.hpp"

namespace raise::exec {

core::ImageRef execute_candidate(const core::Candidate& c, const core::RunConfig& config,
                                 GeneratorBackend& generator, EditorBackend& editor, core::ImageStore& store) {
    if (c.reference.has_value() != core::is_edit_kind(c.kind)) {
        throw core::ExecutionError("candidate reference/kind coupling violated");
    }
    core::Bytes png;
    if (!c.reference) {
        GenRequest req;
        req.prompt = c.prompt;
        req.seed = c.seed;
        req.steps = config.steps;
        req.width = config.image_width;
        req.height = config.image_height;
        png = generator.generate(req);
    } else {
        EditRequest req;
        req.instruction = c.prompt;
        req.seed = c.seed;
        req.steps = config.steps;
        req.reference_png = store.get(c.reference->content_id);
        png = editor.edit(req);
    }
    return store.put_png(std::move(png));
}

std::vector<ExecutionResult> execute_population(const std::vector<core::Candidate>& candidates,
                                                const core::RunConfig& config, GeneratorBackend& generator,
                                                EditorBackend& editor, core::ImageStore& store) {
    if (candidates.empty()) throw core::ExecutionError("execute_population called with an empty population");

    std::vector<ExecutionResult> results(candidates.size());
    std::atomic<std::size_t> next{0};

    // Workers claim candidates by index and write only their own result slot;
    // the vector is assembled in slot order by construction.
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= candidates.size()) return;
            const core::Candidate& c = candidates[i];
            ExecutionResult& r = results[i];
            r.candidate = c.id();
            const auto started = std::chrono::steady_clock::now();
            try {
                r.output = execute_candidate(c, config, generator, editor, store);
            } catch (const std::exception& e) {
                r.failure = e.what();
            }
            r.duration_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        }
    };

    const int lanes = std::max(1, std::min<int>(config.parallelism, static_cast<int>(candidates.size())));
    if (lanes == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(lanes));
        for (int t = 0; t < lanes; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    bool any_ok = false;
    for (const ExecutionResult& r : results) any_ok = any_ok || r.output.has_value();
    if (!any_ok) {
        throw PopulationError("every candidate in the round failed to execute", std::move(results));
    }
    return results;
}

}  // namespace raise::exec
