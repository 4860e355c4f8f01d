#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omega::diff {

enum class LineKind { Context, Addition, Removal };

struct DiffLine {
    LineKind kind = LineKind::Context;
    /// Line text without its leading mark. CR characters are kept.
    std::string content;
    std::optional<int> old_lineno;
    std::optional<int> new_lineno;
    /// Followed by `\ No newline at end of file`.
    bool no_newline_at_eof = false;
};

struct Hunk {
    int old_start = 0;
    int old_count = 0;
    int new_start = 0;
    int new_count = 0;
    /// Text after the closing `@@`, usually the enclosing function.
    std::string section;
    std::vector<DiffLine> lines;
};

enum class FileStatus { Modified, Added, Deleted, Renamed };

struct FileDiff {
    std::string old_path;
    std::string new_path;
    FileStatus status = FileStatus::Modified;
    std::vector<Hunk> hunks;
    bool is_binary = false;
    /// The section of the input that described this file.
    std::string raw_text;

    /// new_path, or old_path for deleted files.
    const std::string& path() const;
};

struct UnifiedDiff {
    std::vector<FileDiff> files;
    std::string raw_text;
};

std::string_view to_string(FileStatus status);
char mark_of(LineKind kind);

/// Parses `git diff` / `git show` / `diff -u` output. Throws MalformedDiff
/// when hunk counts disagree with the body or for combined diffs.
UnifiedDiff parse_unified_diff(std::string_view text);

/// Renders the hunk body: each line with its mark re-prepended, plus
/// `\ No newline at end of file` markers.
std::string render_hunk_body(const Hunk& hunk);
std::string render_hunk_header(const Hunk& hunk);

/// Renders the diff back to git-style text with normalized headers.
std::string render(const UnifiedDiff& diff);

/// Applies `file` to `pre_image` and returns the post-image. Throws
/// ContextMismatch when a Context/Removal line disagrees with the pre-image.
std::string reconstruct_post(const FileDiff& file, std::string_view pre_image);

}  // namespace omega::diff
