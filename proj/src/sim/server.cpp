#include "raise/sim/server.hpp"

#include <httplib.h>

#include "raise/core/errors.hpp"
#include "raise/ground/grounding.hpp"
#include "raise/sim/png.hpp"

namespace raise::sim {

using core::Json;

struct SimServer::Impl {
    Impl(WorldSpec spec, int k_min) : world(spec, k_min) {}

    SimWorld world;
    httplib::Server server;
};

namespace {

void reply_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(message, "text/plain");
}

std::optional<agents::ChatRequest> chat_request_from_wire(const Json& body) {
    if (!body.contains("messages") || !body["messages"].is_array()) return std::nullopt;
    agents::ChatRequest request;
    if (body.contains("response_format") && body["response_format"].contains("json_schema")) {
        const Json& schema = body["response_format"]["json_schema"];
        if (schema.contains("name") && schema["name"].is_string()) {
            request.response_schema_id = schema["name"].get<std::string>();
        }
    }
    for (const Json& message : body["messages"]) {
        const std::string role = message.value("role", "");
        if (role == "system") {
            if (message.contains("content") && message["content"].is_string()) {
                request.system_text = message["content"].get<std::string>();
            }
        } else if (role == "user") {
            if (!message.contains("content") || !message["content"].is_array()) return std::nullopt;
            for (const Json& part : message["content"]) {
                const std::string type = part.value("type", "");
                if (type == "text") {
                    request.user_parts.push_back(agents::text_part(part.value("text", "")));
                } else if (type == "image_url") {
                    std::string url;
                    if (part.contains("image_url") && part["image_url"].contains("url")) {
                        url = part["image_url"]["url"].get<std::string>();
                    }
                    const std::string prefix = "data:image/png;base64,";
                    if (url.rfind(prefix, 0) != 0) return std::nullopt;
                    auto bytes = core::base64_decode(url.substr(prefix.size()));
                    if (!bytes) return std::nullopt;
                    request.user_parts.push_back(agents::image_part(std::move(*bytes)));
                } else {
                    return std::nullopt;
                }
            }
        }
    }
    return request;
}

}  // namespace

SimServer::SimServer(WorldSpec spec, int k_min) : impl_(std::make_unique<Impl>(spec, k_min)) {
    httplib::Server& s = impl_->server;
    SimWorld& world = impl_->world;

    s.Post("/generate", [&world](const httplib::Request& req, httplib::Response& res) {
        const Json body = Json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("prompt") || !body.contains("seed")) {
            return reply_error(res, 400, "generate expects {prompt, seed, steps, width, height}");
        }
        const auto bits = world.generate_bits(body["prompt"].get<std::string>(), body["seed"].get<std::uint64_t>());
        const core::Bytes png = encode_sim_png(body.value("width", 64), body.value("height", 64), bits);
        res.set_content(std::string(png.begin(), png.end()), "image/png");
    });

    s.Post("/edit", [&world](const httplib::Request& req, httplib::Response& res) {
        const Json body = Json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("instruction") || !body.contains("seed") ||
            !body.contains("reference_png_base64")) {
            return reply_error(res, 400, "edit expects {instruction, seed, steps, reference_png_base64}");
        }
        const auto reference_bytes = core::base64_decode(body["reference_png_base64"].get<std::string>());
        if (!reference_bytes) return reply_error(res, 400, "reference_png_base64 is not valid base64");
        const auto reference_bits = decode_sim_bits(*reference_bytes);
        if (!reference_bits) return reply_error(res, 422, "reference image carries no satisfaction bits");
        try {
            const auto bits = world.edit_bits(body["instruction"].get<std::string>(),
                                              body["seed"].get<std::uint64_t>(), *reference_bits);
            const auto dims = core::png_dimensions(*reference_bytes);
            const core::Bytes png =
                encode_sim_png(dims ? dims->first : 64, dims ? dims->second : 64, bits);
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        } catch (const core::BackendError& e) {
            reply_error(res, 422, e.what());
        }
    });

    s.Post("/score", [&world](const httplib::Request& req, httplib::Response& res) {
        const Json body = Json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("image_png_base64")) {
            return reply_error(res, 400, "score expects {prompt, image_png_base64}");
        }
        const auto bytes = core::base64_decode(body["image_png_base64"].get<std::string>());
        if (!bytes) return reply_error(res, 400, "image_png_base64 is not valid base64");
        const auto bits = decode_sim_bits(*bytes);
        if (!bits || static_cast<int>(bits->size()) != world.spec().m) {
            return reply_error(res, 422, "image payload is not a decodable sim image");
        }
        res.set_content(Json{{"fitness", world.score_bits(*bits)}}.dump(), "application/json");
    });

    s.Post("/ground", [&world](const httplib::Request& req, httplib::Response& res) {
        const core::Bytes png(req.body.begin(), req.body.end());
        const auto bits = decode_sim_bits(png);
        if (!bits) return reply_error(res, 422, "image payload is not a decodable sim image");
        SimGrounding grounding(world);
        const ground::GroundingReply reply = grounding.ground(png);
        Json regions = Json::array();
        for (const ground::RawRegion& r : reply.regions) {
            regions.push_back(Json{{"label", r.label},
                                   {"bbox", Json::array({r.bbox[0], r.bbox[1], r.bbox[2], r.bbox[3]})},
                                   {"mean_depth", r.mean_depth}});
        }
        res.set_content(Json{{"caption", reply.caption},
                             {"width", reply.width},
                             {"height", reply.height},
                             {"regions", regions}}
                            .dump(),
                        "application/json");
    });

    s.Post("/v1/chat/completions", [&world](const httplib::Request& req, httplib::Response& res) {
        const Json body = Json::parse(req.body, nullptr, false);
        if (body.is_discarded()) return reply_error(res, 400, "chat body is not valid JSON");
        const auto request = chat_request_from_wire(body);
        if (!request) return reply_error(res, 400, "chat body is not a valid chat-completions request");
        try {
            const std::string reply = world.agent_reply(*request);
            res.set_content(Json{{"choices",
                                  Json::array({Json{{"message",
                                                     Json{{"role", "assistant"}, {"content", reply}}}}})}}
                                .dump(),
                            "application/json");
        } catch (const std::exception& e) {
            reply_error(res, 422, e.what());
        }
    });
}

SimServer::~SimServer() {
    stop();
}

int SimServer::start(int port) {
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) throw core::ConfigError("sim server could not bind a port");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            throw core::ConfigError("sim server could not bind port " + std::to_string(port));
        }
        port_ = port;
    }
    thread_ = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port_;
}

void SimServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace raise::sim
