#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "raise/agents/prompts.hpp"
#include "raise/core/image_store.hpp"
#include "raise/core/json.hpp"
#include "raise/core/types.hpp"

namespace raise::agents {

struct ChatPart {
    enum class Kind { kText, kImage };
    Kind kind = Kind::kText;
    std::string text;        // kText
    core::Bytes image_png;   // kImage, raw bytes (base64 applied at the wire)

    bool operator==(const ChatPart&) const = default;
};

ChatPart text_part(std::string text);
ChatPart image_part(core::Bytes png);

/// One agent request: a fixed system prompt, ordered user parts, and the id
/// of the schema the structured reply must satisfy. Construction rejects any
/// system text that is not one of the four shipped prompts.
struct ChatRequest {
    std::string system_text;
    std::vector<ChatPart> user_parts;
    std::string response_schema_id;

    static ChatRequest make(AgentRole role, std::vector<ChatPart> parts);
    bool operator==(const ChatRequest&) const = default;
};

/// Chat backend: returns the reply's single JSON document as a string.
/// Throws core::TransportError when the backend cannot be reached.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// One logical agent invocation (internal retries fold into `attempts`).
struct AgentCallRecord {
    AgentRole role = AgentRole::kAnalyzer;
    int attempts = 0;
    bool ok = false;
    std::string error;
    double latency_ms = 0.0;
};

/// JSON schema documents for the four roles (also published in docs/).
core::Json response_schema(AgentRole role);

/// Context describing the candidate whose image/prompt/feedback feeds the
/// next analyzer call.
struct BestContext {
    std::string prompt;
    std::optional<core::ImageRef> image;
    std::optional<core::VerifierOutput> feedback;
};

struct RoundBestExtras {
    std::string prompt;
    core::VerifierOutput feedback;
};

// Pure request renderers: identical context yields byte-identical requests.
ChatRequest render_analyzer_request(const std::string& user_prompt,
                                    const std::optional<BestContext>& global_best,
                                    const std::optional<RoundBestExtras>& round_best_extras, int round,
                                    const core::ImageStore& store);
ChatRequest render_gen_rewrite_request(const std::string& user_prompt, const std::string& current_prompt,
                                       const std::optional<core::ImageRef>& best_image, int round,
                                       const std::vector<std::string>& satisfied,
                                       const std::vector<std::string>& unsatisfied,
                                       const core::ImageStore& store);
ChatRequest render_edit_rewrite_request(const std::string& user_prompt, const std::string& current_prompt,
                                        const core::ImageRef& best_image, int round,
                                        const std::vector<std::string>& satisfied,
                                        const std::vector<std::string>& unsatisfied,
                                        const core::ImageStore& store);
ChatRequest render_verifier_request(const core::ImageRef& round_best_image,
                                    const std::optional<std::string>& evidence_text,
                                    const std::vector<core::BinaryQuestion>& questions,
                                    const core::ImageStore& store);

// Reply parsers; throw core::SchemaError on violations. Exposed for tests.
core::AnalyzerOutput parse_analyzer_reply(const std::string& body, int round);
core::GenRewriteOutput parse_gen_rewrite_reply(const std::string& body, const std::string& current_prompt);
core::EditRewriteOutput parse_edit_rewrite_reply(const std::string& body);
core::VerifierOutput parse_verifier_reply(const std::string& body,
                                          const std::vector<core::BinaryQuestion>& questions);

/// Issues the four logical agent calls with bounded retries: up to 2 re-asks
/// on schema violations (1 for an unchanged adjusted_prompt), each appending
/// a corrective text part; transport failures retry up to the configured
/// limit. Every logical call is reported once through the record callback.
class AgentClient {
public:
    using RecordFn = std::function<void(const AgentCallRecord&, const core::Json& outcome)>;

    AgentClient(ChatBackend& backend, const core::ImageStore& store, int retry_limit);

    void set_record_callback(RecordFn fn) { record_ = std::move(fn); }

    core::AnalyzerOutput analyze(const std::string& user_prompt, const std::optional<BestContext>& global_best,
                                 const std::optional<RoundBestExtras>& extras, int round);
    core::GenRewriteOutput rewrite_generation(const std::string& user_prompt, const std::string& current_prompt,
                                              const std::optional<core::ImageRef>& best_image, int round,
                                              const std::vector<std::string>& satisfied,
                                              const std::vector<std::string>& unsatisfied);
    core::EditRewriteOutput rewrite_editing(const std::string& user_prompt, const std::string& current_prompt,
                                            const core::ImageRef& best_image, int round,
                                            const std::vector<std::string>& satisfied,
                                            const std::vector<std::string>& unsatisfied);
    /// When evidence is absent the request omits the evidence part and the
    /// engine marks the verification ungrounded in the trace. The returned
    /// output has passed enforce_verifier_consistency; `consistency_corrected`
    /// reports whether the backend's all_satisfied flag had to be overridden.
    core::VerifierOutput verify(const core::ImageRef& round_best_image,
                                const std::optional<std::string>& evidence_text,
                                const std::vector<core::BinaryQuestion>& questions,
                                bool* consistency_corrected = nullptr);

private:
    template <typename Output>
    Output call(AgentRole role, ChatRequest request,
                const std::function<Output(const std::string&)>& parse, int difference_retries);

    ChatBackend& backend_;
    const core::ImageStore& store_;
    int retry_limit_;
    RecordFn record_;
};

}  // namespace raise::agents
