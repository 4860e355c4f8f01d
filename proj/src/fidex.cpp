#include "omega/fidex.hpp"

#include "omega/narrator.hpp"
#include "omega/resources.hpp"
#include "omega/text.hpp"

namespace omega::fidex {

namespace {

std::string prompt(std::string_view name) {
    return std::string(text::trim_right(resources::get(name)));
}

}  // namespace

llm::Conversation build_fidex_conversation(const diff::UnifiedDiff& diff) {
    const std::string diff_text(text::trim_right(diff.raw_text));
    const std::string request = text::substitute(resources::get("prompts/fidex/output_request.txt"),
                                                  [&](std::string_view name) -> const std::string* {
                                                      return name == "diff" ? &diff_text : nullptr;
                                                  });
    llm::Conversation conv;
    conv.system(prompt("prompts/fidex/system.txt"))
        .user(prompt("prompts/fidex/ask_instructions.txt"))
        .assistant(prompt("prompts/fidex/instructions.txt"))
        .user(prompt("prompts/fidex/describe_request.txt"))
        .assistant(narrator::render_narrative(diff).text)
        .user(std::string(text::trim_right(request)));
    return conv;
}

DiffExplanation explain_diff(const diff::UnifiedDiff& diff, llm::ChatClient& client,
                             const llm::CompletionParams& params, Mode mode) {
    if (diff.files.empty()) return {"No changes."};
    if (mode == Mode::SingleCall || diff.files.size() == 1)
        return {client.complete(build_fidex_conversation(diff), params)};

    std::string out;
    for (const auto& file : diff.files) {
        diff::UnifiedDiff single;
        single.files.push_back(file);
        single.raw_text = file.raw_text;
        if (!out.empty()) out += "\n\n";
        out += client.complete(build_fidex_conversation(single), params);
    }
    return {out};
}

}  // namespace omega::fidex
