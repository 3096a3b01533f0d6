#pragma once

#include <string_view>

namespace raise::agents {

enum class AgentRole { kAnalyzer, kGenRewriter, kEditRewriter, kVerifier };

const char* to_string(AgentRole role);

/// Fixed system prompt assets, one per agent role. ChatRequest validation
/// only accepts these four.
std::string_view system_prompt_for(AgentRole role);
bool is_shipped_prompt(std::string_view text);

/// Schema id used in the structured-response directive ("analyzer",
/// "gen_rewriter", "edit_rewriter", "verifier").
std::string_view schema_id_for(AgentRole role);

}  // namespace raise::agents
