#pragma once

#include <memory>
#include <string>

#include "raise/agents/protocol.hpp"
#include "raise/engine/engine.hpp"
#include "raise/exec/execution.hpp"
#include "raise/ground/grounding.hpp"

namespace raise::exec {

/// "http://host:port" -> (host, port). Throws core::ConfigError otherwise.
std::pair<std::string, int> parse_http_url(const std::string& url);

/// HTTP clients for the published backend wire protocols (see
/// docs/backend_protocol.md). Every failure surfaces as core::BackendError
/// (generator/editor/scorer/grounding) or core::TransportError (chat).
class HttpGenerator : public GeneratorBackend {
public:
    HttpGenerator(std::string base_url, double timeout_s);
    core::Bytes generate(const GenRequest& request) override;

private:
    std::string base_url_;
    double timeout_s_;
};

class HttpEditor : public EditorBackend {
public:
    HttpEditor(std::string base_url, double timeout_s);
    core::Bytes edit(const EditRequest& request) override;

private:
    std::string base_url_;
    double timeout_s_;
};

class HttpScorer : public engine::ScorerBackend {
public:
    HttpScorer(std::string base_url, double timeout_s);
    double score(const core::Bytes& png, const std::string& user_prompt) override;

private:
    std::string base_url_;
    double timeout_s_;
};

class HttpGrounding : public ground::GroundingBackend {
public:
    HttpGrounding(std::string base_url, double timeout_s);
    ground::GroundingReply ground(const core::Bytes& png) override;

private:
    std::string base_url_;
    double timeout_s_;
};

/// OpenAI-compatible chat-completions client: messages with text and base64
/// image parts plus a json_schema response directive.
class HttpChat : public agents::ChatBackend {
public:
    HttpChat(std::string base_url, double timeout_s);
    std::string complete(const agents::ChatRequest& request) override;

private:
    std::string base_url_;
    double timeout_s_;
};

}  // namespace raise::exec
