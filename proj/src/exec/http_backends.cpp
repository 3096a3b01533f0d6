#include "raise/exec/http_backends.hpp"

#include <httplib.h>

#include <cmath>

#include "raise/core/errors.hpp"

namespace raise::exec {

using core::Json;

std::pair<std::string, int> parse_http_url(const std::string& url) {
    const std::string prefix = "http://";
    if (url.rfind(prefix, 0) != 0) {
        throw core::ConfigError("backend URL must start with http:// : " + url);
    }
    std::string rest = url.substr(prefix.size());
    while (!rest.empty() && rest.back() == '/') rest.pop_back();
    const std::size_t colon = rest.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= rest.size()) {
        throw core::ConfigError("backend URL needs host:port : " + url);
    }
    const std::string host = rest.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
        throw core::ConfigError("backend URL port is not a number: " + url);
    }
    if (port <= 0 || port > 65535) throw core::ConfigError("backend URL port out of range: " + url);
    return {host, port};
}

namespace {

httplib::Client make_client(const std::string& base_url, double timeout_s) {
    const auto [host, port] = parse_http_url(base_url);
    httplib::Client client(host, port);
    const time_t seconds = static_cast<time_t>(timeout_s);
    const time_t micros = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    return client;
}

template <typename Error>
std::string post_or_throw(const std::string& base_url, double timeout_s, const std::string& path,
                          const std::string& body, const std::string& content_type) {
    httplib::Client client = make_client(base_url, timeout_s);
    httplib::Result result = client.Post(path, body, content_type);
    if (!result) {
        throw Error("backend unreachable: " + base_url + path + " (" + httplib::to_string(result.error()) + ")");
    }
    if (result->status != 200) {
        throw Error("backend returned status " + std::to_string(result->status) + " for " + base_url + path +
                    ": " + result->body);
    }
    return result->body;
}

Json parse_json_reply(const std::string& body, const std::string& what) {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw core::BackendError(what + " reply is not valid JSON");
    return j;
}

}  // namespace

HttpGenerator::HttpGenerator(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

core::Bytes HttpGenerator::generate(const GenRequest& request) {
    const Json body{{"prompt", request.prompt},
                    {"seed", request.seed},
                    {"steps", request.steps},
                    {"width", request.width},
                    {"height", request.height}};
    const std::string reply =
        post_or_throw<core::BackendError>(base_url_, timeout_s_, "/generate", body.dump(), "application/json");
    return core::Bytes(reply.begin(), reply.end());
}

HttpEditor::HttpEditor(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

core::Bytes HttpEditor::edit(const EditRequest& request) {
    const Json body{{"instruction", request.instruction},
                    {"seed", request.seed},
                    {"steps", request.steps},
                    {"reference_png_base64", core::base64_encode(request.reference_png)}};
    const std::string reply =
        post_or_throw<core::BackendError>(base_url_, timeout_s_, "/edit", body.dump(), "application/json");
    return core::Bytes(reply.begin(), reply.end());
}

HttpScorer::HttpScorer(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

double HttpScorer::score(const core::Bytes& png, const std::string& user_prompt) {
    const Json body{{"prompt", user_prompt}, {"image_png_base64", core::base64_encode(png)}};
    const std::string reply =
        post_or_throw<core::BackendError>(base_url_, timeout_s_, "/score", body.dump(), "application/json");
    const Json j = parse_json_reply(reply, "scorer");
    if (!j.contains("fitness") || !j.at("fitness").is_number()) {
        throw core::BackendError("scorer reply lacks a numeric fitness field");
    }
    return j.at("fitness").get<double>();
}

HttpGrounding::HttpGrounding(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

ground::GroundingReply HttpGrounding::ground(const core::Bytes& png) {
    const std::string body(png.begin(), png.end());
    const std::string reply =
        post_or_throw<core::BackendError>(base_url_, timeout_s_, "/ground", body, "image/png");
    const Json j = parse_json_reply(reply, "grounding");
    ground::GroundingReply out;
    try {
        out.caption = j.at("caption").get<std::string>();
        out.width = j.at("width").get<int>();
        out.height = j.at("height").get<int>();
        for (const Json& r : j.at("regions")) {
            ground::RawRegion region;
            region.label = r.at("label").get<std::string>();
            const Json& bbox = r.at("bbox");
            if (!bbox.is_array() || bbox.size() != 4) {
                throw core::BackendError("grounding region bbox must have four entries");
            }
            for (std::size_t i = 0; i < 4; ++i) region.bbox[i] = bbox[i].get<int>();
            region.mean_depth = r.at("mean_depth").get<double>();
            out.regions.push_back(std::move(region));
        }
    } catch (const Json::exception& e) {
        throw core::BackendError(std::string("grounding reply is malformed: ") + e.what());
    }
    return out;
}

HttpChat::HttpChat(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

std::string HttpChat::complete(const agents::ChatRequest& request) {
    Json content = Json::array();
    for (const agents::ChatPart& part : request.user_parts) {
        if (part.kind == agents::ChatPart::Kind::kText) {
            content.push_back(Json{{"type", "text"}, {"text", part.text}});
        } else {
            content.push_back(Json{
                {"type", "image_url"},
                {"image_url",
                 Json{{"url", "data:image/png;base64," + core::base64_encode(part.image_png)}}}});
        }
    }
    const Json body{
        {"model", "raise-agent"},
        {"messages",
         Json::array({Json{{"role", "system"}, {"content", request.system_text}},
                      Json{{"role", "user"}, {"content", content}}})},
        {"response_format",
         Json{{"type", "json_schema"},
              {"json_schema",
               Json{{"name", request.response_schema_id},
                    {"schema", agents::response_schema(request.response_schema_id == "analyzer"
                                                           ? agents::AgentRole::kAnalyzer
                                                       : request.response_schema_id == "gen_rewriter"
                                                           ? agents::AgentRole::kGenRewriter
                                                       : request.response_schema_id == "edit_rewriter"
                                                           ? agents::AgentRole::kEditRewriter
                                                           : agents::AgentRole::kVerifier)}}}}}};
    const std::string reply = post_or_throw<core::TransportError>(base_url_, timeout_s_, "/v1/chat/completions",
                                                                  body.dump(), "application/json");
    const Json j = Json::parse(reply, nullptr, false);
    if (j.is_discarded()) throw core::TransportError("chat reply is not valid JSON");
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const Json::exception&) {
        throw core::TransportError("chat reply lacks choices[0].message.content");
    }
}

}  // namespace raise::exec
