#include "raise/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "raise/core/errors.hpp"
#include "raise/sim/png.hpp"

namespace raise::sim {

using core::Json;

namespace {

constexpr std::string_view kRewriteMarker = " | adjustment round ";

std::uint64_t draw_key(std::uint64_t world_seed, std::uint64_t seed, std::string_view domain) {
    return core::mix64(core::mix64(world_seed) ^ core::mix64(seed) ^ core::fnv1a64(domain));
}

/// First text part of the request (the labeled context block).
const std::string* first_text_part(const agents::ChatRequest& request) {
    for (const agents::ChatPart& p : request.user_parts) {
        if (p.kind == agents::ChatPart::Kind::kText) return &p.text;
    }
    return nullptr;
}

const core::Bytes* first_image_part(const agents::ChatRequest& request) {
    for (const agents::ChatPart& p : request.user_parts) {
        if (p.kind == agents::ChatPart::Kind::kImage) return &p.image_png;
    }
    return nullptr;
}

/// Value of a "key: <json>" line within the labeled block.
std::optional<Json> labeled_value(const std::string& text, const std::string& key) {
    const std::string prefix = key + ": ";
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (line.rfind(prefix, 0) == 0) {
            Json v = Json::parse(line.substr(prefix.size()), nullptr, false);
            if (!v.is_discarded()) return v;
            return std::nullopt;
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return std::nullopt;
}

std::optional<int> labeled_int(const std::string& text, const std::string& key) {
    const auto v = labeled_value(text, key);
    if (!v || !v->is_number_integer()) return std::nullopt;
    return v->get<int>();
}

std::optional<std::string> labeled_string(const std::string& text, const std::string& key) {
    const auto v = labeled_value(text, key);
    if (!v || !v->is_string()) return std::nullopt;
    return v->get<std::string>();
}

/// Requirement index encoded in scripted requirement/question texts.
std::optional<int> subject_index(const std::string& text) {
    const std::size_t pos = text.find("subject ");
    if (pos == std::string::npos) return std::nullopt;
    std::size_t i = pos + 8;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    int value = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i] - '0');
        ++i;
    }
    return value;
}

std::string requirement_text(int k) {
    return "subject " + std::to_string(k) + " appears exactly once in the scene";
}

std::string question_text(int k) {
    return "Does the image show subject " + std::to_string(k) + " exactly once?";
}

std::vector<int> parse_subject_indices(const Json& texts) {
    std::vector<int> out;
    if (!texts.is_array()) return out;
    for (const Json& t : texts) {
        if (!t.is_string()) continue;
        if (auto k = subject_index(t.get<std::string>())) out.push_back(*k);
    }
    return out;
}

}  // namespace

void to_json(Json& j, const WorldSpec& v) {
    j = Json{{"m", v.m},
             {"p_resample", v.p_resample},
             {"p_rewrite", v.p_rewrite},
             {"p_edit_target", v.p_edit_target},
             {"p_edit_side", v.p_edit_side},
             {"analyzer_recall", v.analyzer_recall},
             {"verifier_flip", v.verifier_flip},
             {"world_seed", v.world_seed}};
}

void from_json(const Json& j, WorldSpec& v) {
    v = WorldSpec{};
    if (j.contains("m")) j.at("m").get_to(v.m);
    if (j.contains("p_resample")) j.at("p_resample").get_to(v.p_resample);
    if (j.contains("p_rewrite")) j.at("p_rewrite").get_to(v.p_rewrite);
    if (j.contains("p_edit_target")) j.at("p_edit_target").get_to(v.p_edit_target);
    if (j.contains("p_edit_side")) j.at("p_edit_side").get_to(v.p_edit_side);
    if (j.contains("analyzer_recall")) j.at("analyzer_recall").get_to(v.analyzer_recall);
    if (j.contains("verifier_flip")) j.at("verifier_flip").get_to(v.verifier_flip);
    if (j.contains("world_seed")) j.at("world_seed").get_to(v.world_seed);
}

void validate_world(const WorldSpec& spec) {
    if (spec.m < 1) throw core::ConfigError("sim world needs m >= 1");
    const double ps[] = {spec.p_resample, spec.p_rewrite,      spec.p_edit_target,
                         spec.p_edit_side, spec.analyzer_recall, spec.verifier_flip};
    for (double p : ps) {
        if (!(p >= 0.0 && p <= 1.0)) throw core::ConfigError("sim world probabilities must lie in [0, 1]");
    }
}

SimWorld::SimWorld(WorldSpec spec, int k_min) : spec_(spec), k_min_(k_min) {
    validate_world(spec_);
}

bool SimWorld::is_rewritten_prompt(const std::string& prompt) {
    return prompt.find(kRewriteMarker) != std::string::npos;
}

std::string SimWorld::rewrite_marker() {
    return std::string(kRewriteMarker);
}

std::vector<bool> SimWorld::generate_bits(const std::string& prompt, std::uint64_t seed) const {
    const double p = is_rewritten_prompt(prompt) ? spec_.p_rewrite : spec_.p_resample;
    core::SplitMixStream stream(draw_key(spec_.world_seed, seed, "generate"));
    std::vector<bool> bits(static_cast<std::size_t>(spec_.m));
    for (int k = 0; k < spec_.m; ++k) bits[static_cast<std::size_t>(k)] = stream.next_unit() < p;
    return bits;
}

std::vector<bool> SimWorld::edit_bits(const std::string& instruction, std::uint64_t seed,
                                      const std::vector<bool>& reference) const {
    if (instruction.rfind("set req", 0) != 0) {
        throw core::BackendError("editor cannot parse instruction: " + instruction);
    }
    std::set<int> targets;
    for (std::size_t i = 7; i < instruction.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(instruction[i]))) {
            int value = 0;
            while (i < instruction.size() && std::isdigit(static_cast<unsigned char>(instruction[i]))) {
                value = value * 10 + (instruction[i] - '0');
                ++i;
            }
            if (value >= 0 && value < spec_.m) targets.insert(value);
        }
    }
    if (targets.empty()) throw core::BackendError("editor instruction names no requirement: " + instruction);

    core::SplitMixStream stream(draw_key(spec_.world_seed, seed, "edit"));
    std::vector<bool> bits(static_cast<std::size_t>(spec_.m));
    for (int k = 0; k < spec_.m; ++k) {
        const double u = stream.next_unit();
        const bool ref = k < static_cast<int>(reference.size()) && reference[static_cast<std::size_t>(k)];
        if (targets.count(k)) {
            bits[static_cast<std::size_t>(k)] = ref || (u < spec_.p_edit_target);
        } else if (ref) {
            bits[static_cast<std::size_t>(k)] = !(u < spec_.p_edit_side);
        } else {
            bits[static_cast<std::size_t>(k)] = false;
        }
    }
    return bits;
}

double SimWorld::score_bits(const std::vector<bool>& bits) const {
    int set = 0;
    for (bool b : bits) set += b ? 1 : 0;
    return static_cast<double>(set) / static_cast<double>(spec_.m);
}

int SimWorld::surfaced_count() const {
    const int surfaced = static_cast<int>(std::ceil(spec_.analyzer_recall * spec_.m));
    return std::max(1, std::min(surfaced, spec_.m));
}

std::string SimWorld::agent_reply(const agents::ChatRequest& request) const {
    const std::string* text = first_text_part(request);
    if (!text) throw core::TransportError("sim chat request carries no text part");
    const core::Bytes* image = first_image_part(request);

    if (request.response_schema_id == "analyzer") {
        const int round = labeled_int(*text, "round").value_or(1);
        const std::string original = labeled_string(*text, "original_prompt").value_or("");
        const std::string current = labeled_string(*text, "current_prompt").value_or(original);
        std::optional<std::vector<bool>> bits;
        if (image) bits = decode_sim_bits(*image);

        const int surfaced = surfaced_count();
        Json requirements = Json::array();
        Json questions = Json::array();
        Json satisfied = Json::array();
        Json unsatisfied = Json::array();
        bool all_major_satisfied = bits.has_value();
        for (int k = 0; k < surfaced; ++k) {
            const std::string req = requirement_text(k);
            requirements.push_back(req);
            questions.push_back(question_text(k));
            const bool sat = round > 1 && bits && k < static_cast<int>(bits->size()) &&
                             (*bits)[static_cast<std::size_t>(k)];
            if (sat) {
                satisfied.push_back(req);
            } else {
                unsatisfied.push_back(req);
                all_major_satisfied = false;
            }
        }
        // The scripted analyzer stays conservative: "ending" only strictly
        // after the minimum exploration window.
        const bool ending = all_major_satisfied && round > k_min_ && round >= 2;
        return Json{{"analyzer_reasoning",
                     "scripted analysis of " + std::to_string(surfaced) + " hidden requirements at round " +
                         std::to_string(round)},
                    {"original_prompt", original},
                    {"current_prompt", current},
                    {"requirements_analysis", requirements},
                    {"satisfied_requirements", satisfied},
                    {"unsatisfied_requirements", unsatisfied},
                    {"binary_questions", questions},
                    {"model_choice", ending ? "ending" : "continue"}}
            .dump();
    }

    if (request.response_schema_id == "gen_rewriter") {
        const int round = labeled_int(*text, "round").value_or(1);
        const std::string original = labeled_string(*text, "original_prompt").value_or("");
        const std::string current = labeled_string(*text, "current_prompt").value_or(original);
        const auto unsat = labeled_value(*text, "unsatisfied_requirements").value_or(Json::array());
        const std::vector<int> indices = parse_subject_indices(unsat);

        Json adjustments = Json::array();
        std::string target_list;
        for (int k : indices) {
            adjustments.push_back("Describe subject " + std::to_string(k) +
                                  " explicitly so it appears exactly once.");
            if (!target_list.empty()) target_list += ",";
            target_list += std::to_string(k);
        }
        std::string adjusted;
        if (indices.empty()) {
            adjustments.push_back("Reinforce the existing composition without altering satisfied requirements.");
            adjusted = original + std::string(kRewriteMarker) + std::to_string(round) + ": reinforce composition";
        } else {
            adjusted = original + std::string(kRewriteMarker) + std::to_string(round) + ": address subjects " +
                       target_list;
        }
        return Json{{"rewriter_reasoning", "scripted rewrite targeting the unsatisfied subjects"},
                    {"original_prompt", original},
                    {"current_prompt", current},
                    {"planned_adjustments", adjustments},
                    {"adjusted_prompt", adjusted}}
            .dump();
    }

    if (request.response_schema_id == "edit_rewriter") {
        const std::string original = labeled_string(*text, "original_prompt").value_or("");
        const std::string current = labeled_string(*text, "current_prompt").value_or(original);
        const auto unsat = labeled_value(*text, "unsatisfied_requirements").value_or(Json::array());
        std::vector<int> indices = parse_subject_indices(unsat);
        if (indices.empty()) indices.push_back(0);

        Json edits = Json::array();
        std::string all_targets;
        for (int k : indices) {
            edits.push_back("set req " + std::to_string(k));
            if (!all_targets.empty()) all_targets += ",";
            all_targets += std::to_string(k);
        }
        return Json{{"rewriter_reasoning", "scripted edits targeting the unsatisfied subjects"},
                    {"original_prompt", original},
                    {"current_prompt", current},
                    {"planned_edits", edits},
                    {"single_editing_prompt", "set req " + std::to_string(indices.front())},
                    {"comprehensive_editing_prompt", "set reqs " + all_targets}}
            .dump();
    }

    if (request.response_schema_id == "verifier") {
        const auto questions = labeled_value(*text, "binary_questions").value_or(Json::array());
        std::optional<std::vector<bool>> bits;
        if (image) bits = decode_sim_bits(*image);

        core::SplitMixStream flips(
            draw_key(spec_.world_seed, image ? core::fnv1a64(*image) : 0, "verifier"));
        Json rows = Json::array();
        bool all_yes = true;
        int satisfied_count = 0;
        for (const Json& q : questions) {
            const std::string question = q.is_string() ? q.get<std::string>() : "";
            const auto k = subject_index(question);
            bool truth = false;
            if (k && bits && *k < static_cast<int>(bits->size())) {
                truth = (*bits)[static_cast<std::size_t>(*k)];
            }
            const bool flipped = flips.next_unit() < spec_.verifier_flip;
            const bool answer = flipped ? !truth : truth;
            all_yes = all_yes && answer;
            satisfied_count += answer ? 1 : 0;
            rows.push_back(Json::array(
                {question, answer ? "Yes" : "No",
                 answer ? "the subject is present exactly once" : "the subject is missing or duplicated"}));
        }
        return Json{{"verifier_reasoning", "scripted verification from the hidden satisfaction bits"},
                    {"current_image_caption",
                     "synthetic scene satisfying " + std::to_string(satisfied_count) + " of " +
                         std::to_string(questions.size()) + " checked requirements"},
                    {"questions_answers_and_explanations", rows},
                    {"verifier_summary",
                     std::to_string(satisfied_count) + " of " + std::to_string(questions.size()) +
                         " requirements look satisfied"},
                    {"all_satisfied", all_yes}}
            .dump();
    }

    throw core::TransportError("sim chat cannot serve schema id: " + request.response_schema_id);
}

core::Bytes SimGenerator::generate(const exec::GenRequest& request) {
    const std::vector<bool> bits = world_.generate_bits(request.prompt, request.seed);
    return encode_sim_png(request.width, request.height, bits);
}

core::Bytes SimEditor::edit(const exec::EditRequest& request) {
    const auto reference = decode_sim_bits(request.reference_png);
    if (!reference) throw core::BackendError("editor reference image carries no satisfaction bits");
    const auto dims = core::png_dimensions(request.reference_png);
    const std::vector<bool> bits = world_.edit_bits(request.instruction, request.seed, *reference);
    return encode_sim_png(dims ? dims->first : 64, dims ? dims->second : 64, bits);
}

double SimScorer::score(const core::Bytes& png, const std::string&) {
    const auto bits = decode_sim_bits(png);
    if (!bits || static_cast<int>(bits->size()) != world_.spec().m) {
        throw core::BackendError("scorer payload is not a decodable sim image");
    }
    return world_.score_bits(*bits);
}

ground::GroundingReply SimGrounding::ground(const core::Bytes& png) {
    const auto bits = decode_sim_bits(png);
    if (!bits) throw core::BackendError("grounding payload is not a decodable sim image");
    const auto dims = core::png_dimensions(png);
    ground::GroundingReply reply;
    reply.width = dims ? dims->first : 0;
    reply.height = dims ? dims->second : 0;
    int satisfied = 0;
    for (std::size_t k = 0; k < bits->size(); ++k) {
        if (!(*bits)[k]) continue;
        ++satisfied;
        ground::RawRegion region;
        region.label = "req-" + std::to_string(k) + " satisfied";
        region.bbox = {0, 0, 1, 1};
        region.mean_depth = 128.0;
        reply.regions.push_back(std::move(region));
    }
    reply.caption = "synthetic scene with " + std::to_string(satisfied) + " of " +
                    std::to_string(bits->size()) + " requirements satisfied";
    return reply;
}

std::string SimChat::complete(const agents::ChatRequest& request) {
    return world_.agent_reply(request);
}

ConvergenceReport run_convergence(const WorldSpec& spec, const core::RunConfig& config, int trials,
                                  std::uint64_t seed_base) {
    if (trials < 1) throw core::ConfigError("run_convergence needs at least one trial");
    ConvergenceReport report;
    report.trials = trials;
    long satisfied = 0;
    long rounds_sum = 0;
    long samples_sum = 0;
    long calls_sum = 0;

    for (int t = 0; t < trials; ++t) {
        core::RunConfig cfg = config;
        cfg.run_seed = seed_base + static_cast<std::uint64_t>(t);
        SimBackends backends(spec, cfg.k_min);
        core::ImageStore store;
        engine::Engine engine(cfg, backends.engine_backends(), store);
        const core::RunState state = engine.run("sim convergence prompt");

        int completed = 0;
        for (const core::RoundRecord& r : state.rounds) {
            if (r.samples > 0) ++completed;
        }
        rounds_sum += completed;
        samples_sum += state.total_samples;
        calls_sum += state.total_agent_calls;

        if (state.global_best) {
            for (const core::RoundRecord& r : state.rounds) {
                for (const core::ScoredCandidate& s : r.scored) {
                    if (s.candidate.id() == *state.global_best) {
                        const auto bits = decode_sim_bits(store.get(s.output.content_id));
                        if (bits && static_cast<int>(bits->size()) == spec.m &&
                            std::all_of(bits->begin(), bits->end(), [](bool b) { return b; })) {
                            ++satisfied;
                        }
                    }
                }
            }
        }
    }

    report.satisfied_fraction = static_cast<double>(satisfied) / trials;
    report.mean_rounds = static_cast<double>(rounds_sum) / trials;
    report.mean_samples = static_cast<double>(samples_sum) / trials;
    report.mean_agent_calls = static_cast<double>(calls_sum) / trials;
    return report;
}

}  // namespace raise::sim
