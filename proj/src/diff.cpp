#include "omega/diff.hpp"

#include <charconv>

#include "omega/error.hpp"

namespace omega::diff {

const std::string& FileDiff::path() const {
    return status == FileStatus::Deleted ? old_path : new_path;
}

std::string_view to_string(FileStatus status) {
    switch (status) {
        case FileStatus::Modified: return "modified";
        case FileStatus::Added: return "added";
        case FileStatus::Deleted: return "deleted";
        case FileStatus::Renamed: return "renamed";
    }
    return "modified";
}

char mark_of(LineKind kind) {
    switch (kind) {
        case LineKind::Context: return ' ';
        case LineKind::Addition: return '+';
        case LineKind::Removal: return '-';
    }
    return ' ';
}

namespace {

constexpr std::string_view kNoNewline = "\\ No newline at end of file";

struct Line {
    std::string_view text;  // without '\n'
    std::size_t offset;
};

std::vector<Line> split_with_offsets(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back({text.substr(start, nl - start), start});
        start = nl + 1;
    }
    return lines;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

// Drops the `a/` or `b/` prefix and any tab-separated timestamp.
std::string clean_header_path(std::string_view raw) {
    auto tab = raw.find('\t');
    if (tab != std::string_view::npos) raw = raw.substr(0, tab);
    while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ')) raw.remove_suffix(1);
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') raw = raw.substr(1, raw.size() - 2);
    if (raw == "/dev/null") return std::string(raw);
    if (starts_with(raw, "a/") || starts_with(raw, "b/")) raw.remove_prefix(2);
    return std::string(raw);
}

// "diff --git a/x b/y" -> (x, y). Paths with " b/" inside are ambiguous; the
// ---/+++ and rename headers override this guess when present.
std::pair<std::string, std::string> git_header_paths(std::string_view rest) {
    if (starts_with(rest, "a/")) {
        // Prefer the split where both halves are equal (the common case).
        if ((rest.size() - 1) % 2 == 0) {
            std::size_t half = (rest.size() - 1) / 2;
            auto left = rest.substr(0, half);
            auto right = rest.substr(half + 1);
            if (rest[half] == ' ' && starts_with(right, "b/") && left.substr(2) == right.substr(2))
                return {std::string(left.substr(2)), std::string(right.substr(2))};
        }
        auto sep = rest.find(" b/");
        if (sep != std::string_view::npos)
            return {std::string(rest.substr(2, sep - 2)), std::string(rest.substr(sep + 3))};
    }
    auto sp = rest.find(' ');
    if (sp == std::string_view::npos) return {std::string(rest), std::string(rest)};
    return {std::string(rest.substr(0, sp)), std::string(rest.substr(sp + 1))};
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_range(std::string_view s, int& start, int& count) {
    auto comma = s.find(',');
    if (comma == std::string_view::npos) {
        count = 1;
        return parse_int(s, start);
    }
    return parse_int(s.substr(0, comma), start) && parse_int(s.substr(comma + 1), count);
}

// "@@ -a,b +c,d @@ section"
bool parse_hunk_header(std::string_view line, Hunk& hunk) {
    if (!starts_with(line, "@@ -")) return false;
    auto close = line.find(" @@", 4);
    if (close == std::string_view::npos) return false;
    auto ranges = line.substr(4, close - 4);
    auto plus = ranges.find(" +");
    if (plus == std::string_view::npos) return false;
    if (!parse_range(ranges.substr(0, plus), hunk.old_start, hunk.old_count)) return false;
    if (!parse_range(ranges.substr(plus + 2), hunk.new_start, hunk.new_count)) return false;
    if (hunk.old_start < 0 || hunk.old_count < 0 || hunk.new_start < 0 || hunk.new_count < 0)
        return false;
    auto section = line.substr(close + 3);
    if (!section.empty() && section.front() == ' ') section.remove_prefix(1);
    hunk.section = std::string(section);
    return true;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text), lines_(split_with_offsets(text)) {}

    UnifiedDiff run() {
        UnifiedDiff out;
        out.raw_text = std::string(text_);
        while (pos_ < lines_.size()) {
            auto line = lines_[pos_].text;
            if (starts_with(line, "diff --cc ") || starts_with(line, "diff --combined ") ||
                starts_with(line, "@@@ ")) {
                throw MalformedDiff("", lines_[pos_].offset, "combined diffs are not supported");
            }
            if (starts_with(line, "diff --git ")) {
                out.files.push_back(parse_file(true));
            } else if (starts_with(line, "--- ") && pos_ + 1 < lines_.size() &&
                       starts_with(lines_[pos_ + 1].text, "+++ ")) {
                out.files.push_back(parse_file(false));
            } else if (starts_with(line, "@@ ")) {
                throw MalformedDiff("", lines_[pos_].offset, "hunk without a file header");
            } else {
                ++pos_;  // preamble such as commit headers
            }
        }
        return out;
    }

private:
    std::size_t offset_of(std::size_t index) const {
        return index < lines_.size() ? lines_[index].offset : text_.size();
    }

    std::size_t end_offset_of(std::size_t index) const {
        if (index >= lines_.size()) return text_.size();
        return lines_[index].offset;
    }

    FileDiff parse_file(bool git_header) {
        FileDiff file;
        std::size_t first = pos_;
        bool saw_new_file = false, saw_deleted = false, saw_rename = false;
        if (git_header) {
            auto [a, b] = git_header_paths(lines_[pos_].text.substr(11));
            file.old_path = a;
            file.new_path = b;
            ++pos_;
            // Extended headers up to the ---/+++ pair or the next file.
            while (pos_ < lines_.size()) {
                auto line = lines_[pos_].text;
                if (starts_with(line, "diff --git ") || starts_with(line, "@@ ") ||
                    starts_with(line, "diff --cc ") || starts_with(line, "diff --combined "))
                    break;
                if (starts_with(line, "--- ") && pos_ + 1 < lines_.size() &&
                    starts_with(lines_[pos_ + 1].text, "+++ "))
                    break;
                if (starts_with(line, "new file mode")) saw_new_file = true;
                else if (starts_with(line, "deleted file mode")) saw_deleted = true;
                else if (starts_with(line, "rename from ")) {
                    saw_rename = true;
                    file.old_path = std::string(line.substr(12));
                } else if (starts_with(line, "rename to ")) {
                    saw_rename = true;
                    file.new_path = std::string(line.substr(10));
                } else if (starts_with(line, "copy from ")) {
                    file.old_path = std::string(line.substr(10));
                } else if (starts_with(line, "copy to ")) {
                    file.new_path = std::string(line.substr(8));
                } else if (starts_with(line, "Binary files ") || starts_with(line, "GIT binary patch")) {
                    file.is_binary = true;
                }
                ++pos_;
            }
        }
        bool old_null = false, new_null = false;
        if (pos_ < lines_.size() && starts_with(lines_[pos_].text, "--- ")) {
            auto old_p = clean_header_path(lines_[pos_].text.substr(4));
            auto new_p = clean_header_path(lines_[pos_ + 1].text.substr(4));
            old_null = old_p == "/dev/null";
            new_null = new_p == "/dev/null";
            if (!old_null) file.old_path = old_p;
            if (!new_null) file.new_path = new_p;
            pos_ += 2;
        }
        if (old_null || saw_new_file) {
            file.status = FileStatus::Added;
            if (old_null && file.old_path.empty()) file.old_path = file.new_path;
        } else if (new_null || saw_deleted) {
            file.status = FileStatus::Deleted;
            if (new_null && file.new_path.empty()) file.new_path = file.old_path;
        } else if (saw_rename) {
            file.status = FileStatus::Renamed;
        }

        while (pos_ < lines_.size()) {
            auto line = lines_[pos_].text;
            if (starts_with(line, "@@ ")) {
                if (file.is_binary)
                    throw MalformedDiff(file.path(), lines_[pos_].offset, "hunk in a binary file section");
                file.hunks.push_back(parse_hunk(file));
                continue;
            }
            if (starts_with(line, "diff ")) break;
            if (starts_with(line, "--- ") && pos_ + 1 < lines_.size() &&
                starts_with(lines_[pos_ + 1].text, "+++ "))
                break;
            if (!line.empty() && (line[0] == '+' || line[0] == '-' || line[0] == ' ')) {
                throw MalformedDiff(file.path(), lines_[pos_].offset,
                                    "hunk body is longer than its header counts");
            }
            if (starts_with(line, "Binary files ")) file.is_binary = true;
            ++pos_;
        }
        if (file.is_binary && file.status == FileStatus::Modified && file.old_path != file.new_path)
            file.status = FileStatus::Renamed;
        file.raw_text = std::string(text_.substr(offset_of(first), end_offset_of(pos_) - offset_of(first)));
        return file;
    }

    Hunk parse_hunk(const FileDiff& file) {
        Hunk hunk;
        std::size_t header_offset = lines_[pos_].offset;
        if (!parse_hunk_header(lines_[pos_].text, hunk))
            throw MalformedDiff(file.path(), header_offset, "invalid hunk header");
        ++pos_;
        int old_left = hunk.old_count, new_left = hunk.new_count;
        // With a zero count the start names the line before the change.
        int old_no = hunk.old_count == 0 ? hunk.old_start + 1 : hunk.old_start;
        int new_no = hunk.new_count == 0 ? hunk.new_start + 1 : hunk.new_start;
        while (old_left > 0 || new_left > 0) {
            if (pos_ >= lines_.size())
                throw MalformedDiff(file.path(), text_.size(), "hunk body is shorter than its header counts");
            auto line = lines_[pos_].text;
            std::size_t at = lines_[pos_].offset;
            if (line == kNoNewline) {
                if (hunk.lines.empty()) throw MalformedDiff(file.path(), at, "misplaced end-of-file marker");
                hunk.lines.back().no_newline_at_eof = true;
                ++pos_;
                continue;
            }
            DiffLine dl;
            char mark = line.empty() ? ' ' : line[0];
            dl.content = line.empty() ? std::string() : std::string(line.substr(1));
            switch (mark) {
                case ' ':
                    if (old_left == 0 || new_left == 0)
                        throw MalformedDiff(file.path(), at, "context line exceeds hunk header counts");
                    dl.kind = LineKind::Context;
                    dl.old_lineno = old_no++;
                    dl.new_lineno = new_no++;
                    --old_left;
                    --new_left;
                    break;
                case '-':
                    if (old_left == 0)
                        throw MalformedDiff(file.path(), at, "removal line exceeds hunk header counts");
                    dl.kind = LineKind::Removal;
                    dl.old_lineno = old_no++;
                    --old_left;
                    break;
                case '+':
                    if (new_left == 0)
                        throw MalformedDiff(file.path(), at, "addition line exceeds hunk header counts");
                    dl.kind = LineKind::Addition;
                    dl.new_lineno = new_no++;
                    --new_left;
                    break;
                default:
                    throw MalformedDiff(file.path(), at, "hunk body is shorter than its header counts");
            }
            hunk.lines.push_back(std::move(dl));
            ++pos_;
        }
        if (pos_ < lines_.size() && lines_[pos_].text == kNoNewline) {
            if (hunk.lines.empty())
                throw MalformedDiff(file.path(), lines_[pos_].offset, "misplaced end-of-file marker");
            hunk.lines.back().no_newline_at_eof = true;
            ++pos_;
        }
        if (file.status == FileStatus::Added && hunk.old_count != 0)
            throw MalformedDiff(file.path(), header_offset, "added file with removed lines");
        if (file.status == FileStatus::Deleted && hunk.new_count != 0)
            throw MalformedDiff(file.path(), header_offset, "deleted file with added lines");
        return hunk;
    }

    std::string_view text_;
    std::vector<Line> lines_;
    std::size_t pos_ = 0;
};

std::string range_text(int start, int count) {
    if (count == 1) return std::to_string(start);
    return std::to_string(start) + "," + std::to_string(count);
}

}  // namespace

UnifiedDiff parse_unified_diff(std::string_view text) { return Parser(text).run(); }

std::string render_hunk_header(const Hunk& hunk) {
    std::string out = "@@ -" + range_text(hunk.old_start, hunk.old_count) + " +" +
                      range_text(hunk.new_start, hunk.new_count) + " @@";
    if (!hunk.section.empty()) out += " " + hunk.section;
    return out;
}

std::string render_hunk_body(const Hunk& hunk) {
    std::string out;
    for (const auto& line : hunk.lines) {
        out += mark_of(line.kind);
        out += line.content;
        out += '\n';
        if (line.no_newline_at_eof) {
            out += kNoNewline;
            out += '\n';
        }
    }
    return out;
}

std::string render(const UnifiedDiff& diff) {
    std::string out;
    for (const auto& file : diff.files) {
        out += "diff --git a/" + file.old_path + " b/" + file.new_path + "\n";
        if (file.status == FileStatus::Added) out += "new file mode 100644\n";
        if (file.status == FileStatus::Deleted) out += "deleted file mode 100644\n";
        if (file.status == FileStatus::Renamed) {
            out += "rename from " + file.old_path + "\n";
            out += "rename to " + file.new_path + "\n";
        }
        if (file.is_binary) {
            out += "Binary files a/" + file.old_path + " and b/" + file.new_path + " differ\n";
            continue;
        }
        if (file.hunks.empty()) continue;
        out += "--- " + (file.status == FileStatus::Added ? std::string("/dev/null") : "a/" + file.old_path) + "\n";
        out += "+++ " + (file.status == FileStatus::Deleted ? std::string("/dev/null") : "b/" + file.new_path) + "\n";
        for (const auto& hunk : file.hunks) {
            out += render_hunk_header(hunk) + "\n";
            out += render_hunk_body(hunk);
        }
    }
    return out;
}

std::string reconstruct_post(const FileDiff& file, std::string_view pre_image) {
    if (file.status == FileStatus::Added && !pre_image.empty())
        throw ContextMismatch("pre-image of an added file must be empty");

    std::vector<std::string_view> pre;
    {
        std::size_t start = 0;
        while (start < pre_image.size()) {
            auto nl = pre_image.find('\n', start);
            if (nl == std::string_view::npos) nl = pre_image.size();
            pre.push_back(pre_image.substr(start, nl - start));
            start = nl + 1;
        }
    }
    const bool pre_no_eol = !pre_image.empty() && pre_image.back() != '\n';

    std::vector<std::string_view> post;
    bool post_no_eol = pre_no_eol;
    std::size_t pos = 0;  // next unconsumed pre line, 0-based

    auto check = [&](const DiffLine& line) {
        std::size_t idx = static_cast<std::size_t>(*line.old_lineno) - 1;
        if (idx >= pre.size() || pre[idx] != line.content)
            throw ContextMismatch("line " + std::to_string(*line.old_lineno) + " of '" + file.old_path +
                                  "' does not match the diff");
    };

    for (const auto& hunk : file.hunks) {
        std::size_t start = hunk.old_count == 0 ? static_cast<std::size_t>(hunk.old_start)
                                                : static_cast<std::size_t>(hunk.old_start) - 1;
        if (start < pos || start > pre.size())
            throw ContextMismatch("hunk " + render_hunk_header(hunk) + " is out of range for '" +
                                  file.old_path + "'");
        post.insert(post.end(), pre.begin() + static_cast<std::ptrdiff_t>(pos),
                    pre.begin() + static_cast<std::ptrdiff_t>(start));
        bool last_new_no_eol = false;
        bool has_new_side = false;
        for (const auto& line : hunk.lines) {
            if (line.kind != LineKind::Addition) check(line);
            if (line.kind != LineKind::Removal) {
                post.push_back(line.content);
                has_new_side = true;
                last_new_no_eol = line.no_newline_at_eof;
            }
        }
        pos = start + static_cast<std::size_t>(hunk.old_count);
        if (pos >= pre.size()) post_no_eol = has_new_side && last_new_no_eol;
    }
    if (pos < pre.size()) {
        post.insert(post.end(), pre.begin() + static_cast<std::ptrdiff_t>(pos), pre.end());
        post_no_eol = pre_no_eol;
    }

    std::string out;
    for (std::size_t i = 0; i < post.size(); ++i) {
        out += post[i];
        if (i + 1 < post.size() || !post_no_eol) out += '\n';
    }
    return out;
}

}  // namespace omega::diff
