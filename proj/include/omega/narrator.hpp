#pragma once

#include <string>
#include <vector>

#include "omega/diff.hpp"

namespace omega::narrator {

enum class ChunkKind { Addition, Removal, Replacement };

struct NumberedLine {
    int lineno = 0;
    std::string content;

    friend bool operator==(const NumberedLine&, const NumberedLine&) = default;
};

/// A maximal run of `+` lines, of `-` lines, or a `-` run immediately
/// followed by a `+` run, within one hunk.
struct ChangeItem {
    int index = 0;  // 1-based, global across files
    ChunkKind kind = ChunkKind::Addition;
    std::string file;
    std::vector<NumberedLine> removed_lines;
    std::vector<NumberedLine> added_lines;

    friend bool operator==(const ChangeItem&, const ChangeItem&) = default;
};

struct DiffNarrative {
    std::vector<ChangeItem> items;
    std::string text;
};

std::string_view to_string(ChunkKind kind);

std::vector<ChangeItem> extract_change_items(const diff::UnifiedDiff& diff);

/// Renders the numbered narrative using the bundled template resource.
DiffNarrative render_narrative(const diff::UnifiedDiff& diff);

/// "line 4" or "lines 4–7"; empty for an empty list.
std::string describe_lines(const std::vector<NumberedLine>& lines);

}  // namespace omega::narrator
