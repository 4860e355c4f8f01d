#pragma once

#include <string>

#include "omega/diff.hpp"
#include "omega/llm.hpp"

// Fine-grained interactive diff explainer: a seeded role-playing
// conversation whose only live turn asks for an old-versus-new explanation.
namespace omega::fidex {

/// Six messages: system role-setting, user asks how to read a diff,
/// assistant gives the bundled instructions, user asks for all changes,
/// assistant answers with the Diff Narrative, user asks for the per-file
/// explanation (raw diff and cautions embedded). Only the last message is
/// answered live.
llm::Conversation build_fidex_conversation(const diff::UnifiedDiff& diff);

enum class Mode {
    SingleCall,  // one completion covering every file
    PerFile,     // one conversation and completion per file
};

struct DiffExplanation {
    std::string text;
};

/// "No changes." for a diff without files, without calling the client.
DiffExplanation explain_diff(const diff::UnifiedDiff& diff, llm::ChatClient& client,
                             const llm::CompletionParams& params, Mode mode = Mode::SingleCall);

}  // namespace omega::fidex
