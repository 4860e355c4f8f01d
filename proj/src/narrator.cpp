#include "omega/narrator.hpp"

#include <json.hpp>

#include "omega/resources.hpp"
#include "omega/text.hpp"

namespace omega::narrator {

using diff::LineKind;

std::string_view to_string(ChunkKind kind) {
    switch (kind) {
        case ChunkKind::Addition: return "addition";
        case ChunkKind::Removal: return "removal";
        case ChunkKind::Replacement: return "replacement";
    }
    return "addition";
}

std::vector<ChangeItem> extract_change_items(const diff::UnifiedDiff& diff) {
    std::vector<ChangeItem> items;
    for (const auto& file : diff.files) {
        for (const auto& hunk : file.hunks) {
            std::optional<ChangeItem> open;
            auto flush = [&] {
                if (!open) return;
                open->index = static_cast<int>(items.size()) + 1;
                items.push_back(std::move(*open));
                open.reset();
            };
            for (const auto& line : hunk.lines) {
                switch (line.kind) {
                    case LineKind::Context:
                        flush();
                        break;
                    case LineKind::Removal:
                        // A removal after additions starts a new chunk.
                        if (open && !open->added_lines.empty()) flush();
                        if (!open) open = ChangeItem{0, ChunkKind::Removal, file.path(), {}, {}};
                        open->removed_lines.push_back({*line.old_lineno, line.content});
                        break;
                    case LineKind::Addition:
                        if (!open) open = ChangeItem{0, ChunkKind::Addition, file.path(), {}, {}};
                        else if (open->kind == ChunkKind::Removal) open->kind = ChunkKind::Replacement;
                        open->added_lines.push_back({*line.new_lineno, line.content});
                        break;
                }
            }
            flush();
        }
    }
    return items;
}

namespace {

struct Template {
    nlohmann::json doc;

    Template() : doc(nlohmann::json::parse(resources::get("narrative_template.json"))) {}

    std::string fill(const char* key, const std::map<std::string, std::string, std::less<>>& vars) const {
        std::string tmpl = doc.at(key).get<std::string>();
        return text::substitute(tmpl, [&](std::string_view name) -> const std::string* {
            auto it = vars.find(name);
            return it == vars.end() ? nullptr : &it->second;
        });
    }
};

const Template& narrative_template() {
    static const Template t;
    return t;
}

}  // namespace

std::string describe_lines(const std::vector<NumberedLine>& lines) {
    if (lines.empty()) return {};
    const auto& t = narrative_template();
    int first = lines.front().lineno, last = lines.back().lineno;
    if (first == last) return t.fill("single_line", {{"start", std::to_string(first)}});
    return t.fill("line_range", {{"start", std::to_string(first)}, {"end", std::to_string(last)}});
}

DiffNarrative render_narrative(const diff::UnifiedDiff& diff) {
    const auto& t = narrative_template();
    DiffNarrative out;
    out.items = extract_change_items(diff);
    if (diff.files.empty()) {
        out.text = t.doc.at("empty").get<std::string>() + "\n";
        return out;
    }

    std::string text;
    std::size_t next = 0;
    for (const auto& file : diff.files) {
        if (file.status == diff::FileStatus::Renamed) {
            text += t.fill("file_header_renamed", {{"path", file.new_path}, {"old_path", file.old_path}});
        } else {
            text += t.fill("file_header", {{"path", file.path()}, {"status", std::string(to_string(file.status))}});
        }
        text += '\n';
        std::size_t before = next;
        while (next < out.items.size() && out.items[next].file == file.path()) {
            const auto& item = out.items[next++];
            std::map<std::string, std::string, std::less<>> vars{
                {"index", std::to_string(item.index)},
                {"file", item.file},
                {"old_lines", describe_lines(item.removed_lines)},
                {"new_lines", describe_lines(item.added_lines)},
            };
            text += t.fill(std::string(to_string(item.kind)).c_str(), vars) + "\n";
            for (const auto& l : item.removed_lines) text += t.fill("old_line", {{"content", l.content}}) + "\n";
            for (const auto& l : item.added_lines) text += t.fill("new_line", {{"content", l.content}}) + "\n";
        }
        if (next == before) {
            text += t.doc.at(file.is_binary ? "binary_file" : "no_line_changes").get<std::string>() + "\n";
        }
    }
    out.text = std::move(text);
    return out;
}

}  // namespace omega::narrator
