#include "omega/generator.hpp"

#include <cstdio>
#include <variant>

#include "omega/error.hpp"
#include "omega/resources.hpp"
#include "omega/text.hpp"

namespace omega::generator {

namespace {

std::size_t code_points(std::string_view s) {
    std::size_t n = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    }
    return n;
}

// Lines with CR and trailing blanks removed.
std::vector<std::string> clean_lines(std::string_view text) {
    std::vector<std::string> out;
    for (auto line : text::split_lines(text)) out.emplace_back(text::trim_right(line));
    while (!out.empty() && out.back().empty()) out.pop_back();
    std::size_t first = 0;
    while (first < out.size() && out[first].empty()) ++first;
    out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(first));
    return out;
}

// Models sometimes wrap the whole message in a code fence.
void strip_fence(std::vector<std::string>& lines) {
    if (lines.size() >= 2 && lines.front().rfind("```", 0) == 0 && lines.back() == "```") {
        lines.erase(lines.begin());
        lines.pop_back();
        while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
        while (!lines.empty() && lines.back().empty()) lines.pop_back();
    }
}

}  // namespace

std::string CommitMessage::render() const {
    std::string out(context::to_string(tag));
    out += ": ";
    out += subject;
    if (!body.empty()) {
        out += "\n\n";
        out += body;
    }
    return out;
}

CommitMessage parse_commit_message(std::string_view raw) {
    auto lines = clean_lines(raw);
    strip_fence(lines);
    if (lines.empty()) throw MalformedMessage("commit message is empty");

    const std::string& header = lines.front();
    auto colon = header.find(':');
    if (colon == std::string::npos) throw MalformedMessage("header '" + header + "' has no '<type>:' prefix");
    auto tag = context::header_tag_from_string(text::to_lower(text::trim(std::string_view(header).substr(0, colon))));
    if (!tag) {
        throw MalformedMessage("header type '" + header.substr(0, colon) +
                               "' is not one of fix, feat, refactor, style");
    }
    CommitMessage msg;
    msg.tag = *tag;
    msg.subject = std::string(text::trim(std::string_view(header).substr(colon + 1)));
    if (msg.subject.empty()) throw MalformedMessage("header has an empty subject");
    if (code_points(msg.subject) > kMaxSubjectLength) {
        throw MalformedMessage("subject is " + std::to_string(code_points(msg.subject)) + " characters, limit is " +
                               std::to_string(kMaxSubjectLength));
    }
    if (lines.size() == 1) return msg;
    if (!lines[1].empty()) throw MalformedMessage("no blank line between header and body");
    std::size_t i = 1;
    while (i < lines.size() && lines[i].empty()) ++i;
    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(i), lines.end());
    msg.body = text::join(body, "\n");
    return msg;
}

std::string normalize(std::string_view raw) {
    auto lines = clean_lines(raw);
    strip_fence(lines);
    if (lines.empty()) return "";
    std::string header = lines.front();
    auto colon = header.find(':');
    if (colon != std::string::npos) {
        header = text::to_lower(text::trim(std::string_view(header).substr(0, colon))) + ": " +
                 std::string(text::trim(std::string_view(header).substr(colon + 1)));
    }
    std::size_t i = 1;
    while (i < lines.size() && lines[i].empty()) ++i;
    if (i >= lines.size()) return header;
    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(i), lines.end());
    return header + "\n\n" + text::join(body, "\n");
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kNone = "None.";

std::string status_label(java::UnitStatus status, const std::string& path) {
    return "[" + std::string(java::to_string(status)) + ", " + path + "]";
}

std::string render_issues(const std::vector<context::Issue>& issues) {
    std::vector<std::string> parts;
    for (const auto& i : issues) {
        std::string s = "Issue #" + i.id;
        if (!i.state.empty()) s += " (" + i.state + ")";
        s += ": " + i.title;
        auto body = text::trim(i.body);
        if (!body.empty()) s += "\n" + std::string(body);
        parts.push_back(std::move(s));
    }
    return text::join(parts, "\n\n");
}

std::string render_prs(const std::vector<context::PullRequest>& prs) {
    std::vector<std::string> parts;
    for (const auto& p : prs) {
        std::string s = "Pull request #" + p.id + ": " + p.title;
        if (!p.branch.empty()) s += " (branch " + p.branch + ")";
        auto body = text::trim(p.body);
        if (!body.empty()) s += "\n" + std::string(body);
        parts.push_back(std::move(s));
    }
    return text::join(parts, "\n\n");
}

std::string render_importance(const std::vector<context::FileImportance>& files) {
    std::vector<std::string> parts;
    for (const auto& f : files) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", f.score);
        parts.push_back("- " + f.path + ": " + buf);
    }
    return text::join(parts, "\n");
}

std::string render_method_summary(const context::MethodSummary& summary) {
    auto body = [](const context::AspectTexts& t) { return std::string(text::trim_right(context::render_aspects(t))); };
    if (const auto* m = std::get_if<context::MultiIntentSummary>(&summary)) return body(*m);
    if (const auto* c = std::get_if<context::ChangeImpactSummary>(&summary)) {
        return "How the changes affect the method:\n" + body(*c);
    }
    const auto& ba = std::get<context::BeforeAfterSummary>(summary);
    return "Before the commit:\n" + body(ba.before) + "\nAfter the commit:\n" + body(ba.after);
}

std::string render_methods(const std::map<std::string, context::MethodSummaryEntry>& methods) {
    std::vector<std::string> parts;
    for (const auto& [name, e] : methods) {
        parts.push_back("### " + name + " " + status_label(e.status, e.path) + "\n" + render_method_summary(e.summary));
    }
    return text::join(parts, "\n\n");
}

std::string render_classes(const std::map<std::string, context::ClassSummaryEntry>& classes) {
    std::vector<std::string> parts;
    for (const auto& [name, e] : classes) {
        parts.push_back("### " + name + " " + status_label(e.status, e.path) + "\n" + e.summary);
    }
    return text::join(parts, "\n\n");
}

struct Section {
    std::string_view heading;
    std::string content;
    bool fenced = false;
    bool present = true;

    std::string render() const {
        std::string out(heading);
        out += '\n';
        if (content.empty()) {
            out += kNone;
        } else if (fenced) {
            out += "```diff\n" + content + "\n```";
        } else {
            out += content;
        }
        return out;
    }
};

std::string notice(std::size_t omitted) {
    return "[truncated: " + std::to_string(omitted) + " characters omitted to fit the prompt budget]";
}

}  // namespace

GenerationPrompt build_generation_prompt(const context::CommitContext& ctx, std::size_t char_budget) {
    enum { Diff, Explanation, Issues, Prs, Importance, Activity, Methods, Classes };
    std::vector<Section> sections = {
        {kSectionDiff, std::string(text::trim_right(ctx.diff.raw_text)), true},
        {kSectionExplanation, ctx.diff_explanation ? std::string(text::trim(*ctx.diff_explanation)) : "", false,
         ctx.diff_explanation.has_value()},
        {kSectionIssues, render_issues(ctx.issues)},
        {kSectionPullRequests, render_prs(ctx.pull_requests)},
        {kSectionImportance, render_importance(ctx.file_importance)},
        {kSectionActivity,
         ctx.activity ? std::string(context::to_string(ctx.activity->header_tag)) + " (" +
                            std::string(context::to_string(ctx.activity->value)) + " maintenance)"
                      : ""},
        {kSectionMethods, render_methods(ctx.method_summaries)},
        {kSectionClasses, render_classes(ctx.class_summaries)},
    };

    const std::string system(text::trim_right(resources::get("prompts/generate/system.txt")));
    const std::string instructions = std::string(kSectionInstructions) + "\n" +
                                     std::string(text::trim_right(resources::get("prompts/generate/instructions.txt")));

    auto assemble = [&] {
        std::vector<std::string> parts;
        for (const auto& s : sections) {
            if (s.present) parts.push_back(s.render());
        }
        parts.push_back(instructions);
        return text::join(parts, "\n\n");
    };

    GenerationPrompt out;
    std::string user = assemble();
    const int cut_order[] = {Classes, Methods, Prs, Issues, Explanation, Importance, Diff};
    for (int idx : cut_order) {
        if (system.size() + user.size() <= char_budget) break;
        Section& s = sections[static_cast<std::size_t>(idx)];
        if (!s.present || s.content.empty()) continue;
        std::size_t excess = system.size() + user.size() - char_budget;
        std::size_t reserve = notice(s.content.size()).size() + 1;
        std::size_t keep = s.content.size() > excess + reserve ? s.content.size() - excess - reserve : 0;
        std::string kept(text::utf8_prefix(s.content, keep));
        std::size_t omitted = s.content.size() - kept.size();
        s.content = kept.empty() ? notice(omitted) : kept + "\n" + notice(omitted);
        out.truncated_sections.emplace_back(s.heading);
        user = assemble();
    }
    if (system.size() + user.size() > char_budget) {
        throw ContextTooLarge("prompt needs " + std::to_string(system.size() + user.size()) +
                              " characters after truncation, budget is " + std::to_string(char_budget));
    }
    out.conversation.system(system).user(std::move(user));
    return out;
}

GenerationResult generate(const context::CommitContext& ctx, llm::ChatClient& client,
                          const llm::CompletionParams& params, std::size_t char_budget) {
    auto prompt = build_generation_prompt(ctx, char_budget);
    GenerationResult result;
    result.truncated_sections = std::move(prompt.truncated_sections);
    result.transcript = std::move(prompt.conversation);

    std::string reply = client.complete(result.transcript, params);
    result.completions = 1;
    result.transcript.assistant(reply);
    try {
        result.message = parse_commit_message(reply);
    } catch (const MalformedMessage&) {
        result.transcript.user(std::string(text::trim_right(resources::get("prompts/generate/reprompt.txt"))));
        reply = client.complete(result.transcript, params);
        result.completions = 2;
        result.transcript.assistant(reply);
        result.message = parse_commit_message(reply);
    }

    if (ctx.activity && ctx.activity->header_tag != result.message.tag) {
        result.overridden_tag = result.message.tag;
        result.message.tag = ctx.activity->header_tag;
    }
    return result;
}

}  // namespace omega::generator
