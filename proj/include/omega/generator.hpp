#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omega/context.hpp"
#include "omega/llm.hpp"

// All-in-context commit message generation and commit message parsing.
namespace omega::generator {

inline constexpr std::size_t kMaxSubjectLength = 72;
inline constexpr std::size_t kDefaultPromptBudget = 24000;

struct CommitMessage {
    context::HeaderTag tag = context::HeaderTag::Fix;
    std::string subject;
    std::string body;

    /// `<tag>: <subject>`, then a blank line and the body when there is one.
    std::string render() const;

    friend bool operator==(const CommitMessage&, const CommitMessage&) = default;
};

/// Splits the `tag: subject` header from the body. A non-empty body must be
/// separated from the header by a blank line. Throws MalformedMessage.
CommitMessage parse_commit_message(std::string_view text);

/// Canonical layout: LF line ends, trailing spaces removed, lowercase tag, one
/// space after the colon, exactly one blank line before the body, no leading
/// or trailing blank lines.
std::string normalize(std::string_view text);

/// Section headings of the user prompt, in order.
inline constexpr std::string_view kSectionDiff = "## Diff";
inline constexpr std::string_view kSectionExplanation = "## Diff Explanation";
inline constexpr std::string_view kSectionIssues = "## Issues";
inline constexpr std::string_view kSectionPullRequests = "## Pull Requests";
inline constexpr std::string_view kSectionImportance = "## File Importance";
inline constexpr std::string_view kSectionActivity = "## Maintenance Activity";
inline constexpr std::string_view kSectionMethods = "## Method Summaries";
inline constexpr std::string_view kSectionClasses = "## Class Summaries";
inline constexpr std::string_view kSectionInstructions = "## Instructions";

struct GenerationPrompt {
    llm::Conversation conversation;
    /// Headings of sections cut to fit the budget, in the order they were cut.
    std::vector<std::string> truncated_sections;
};

/// System message plus one user message holding every context section and
/// the instructions. Sections are cut (class summaries first, the diff last)
/// when the prompt exceeds `char_budget`; throws ContextTooLarge if it still
/// does not fit.
GenerationPrompt build_generation_prompt(const context::CommitContext& ctx,
                                         std::size_t char_budget = kDefaultPromptBudget);

struct GenerationResult {
    CommitMessage message;
    /// The prompt and every reply, including a reprompt round if one happened.
    llm::Conversation transcript;
    std::vector<std::string> truncated_sections;
    int completions = 0;
    /// Set when the model chose a tag other than the classifier's.
    std::optional<context::HeaderTag> overridden_tag;
};

/// One completion, or two when the first reply is malformed. The header tag
/// follows ctx.activity when present. Throws MalformedMessage.
GenerationResult generate(const context::CommitContext& ctx, llm::ChatClient& client,
                          const llm::CompletionParams& params, std::size_t char_budget = kDefaultPromptBudget);

}  // namespace omega::generator
