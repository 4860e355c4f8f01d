#include "omega/java.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "omega/error.hpp"
#include "omega/text.hpp"

namespace omega::java {

namespace {

enum class TokenKind { Identifier, Symbol, Literal, Comment };

struct Token {
    TokenKind kind;
    std::size_t begin;
    std::size_t end;
    int line;  // line of the first character
};

struct LexResult {
    std::vector<Token> tokens;
    std::optional<std::size_t> error_at;
    std::string error;
};

bool ident_start(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

bool ident_part(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

LexResult lex(std::string_view src) {
    LexResult out;
    std::size_t i = 0;
    int line = 1;
    auto fail = [&](std::size_t at, std::string why) {
        out.error_at = at;
        out.error = std::move(why) + " at line " + std::to_string(line);
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        int start_line = line;
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            std::size_t nl = src.find('\n', i);
            if (nl == std::string_view::npos) nl = src.size();
            std::size_t end = nl;
            if (end > i && src[end - 1] == '\r' && nl < src.size()) --end;
            out.tokens.push_back({TokenKind::Comment, start, end, start_line});
            i = end;
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            std::size_t close = src.find("*/", i + 2);
            if (close == std::string_view::npos) {
                fail(start, "unterminated comment");
                return out;
            }
            line += static_cast<int>(std::count(src.begin() + static_cast<std::ptrdiff_t>(i),
                                                src.begin() + static_cast<std::ptrdiff_t>(close), '\n'));
            i = close + 2;
            out.tokens.push_back({TokenKind::Comment, start, i, start_line});
            continue;
        }
        if (src.substr(i, 3) == "\"\"\"") {
            std::size_t j = i + 3;
            bool closed = false;
            while (j < src.size()) {
                if (src[j] == '\\') {
                    if (j + 1 < src.size() && src[j + 1] == '\n') ++line;
                    j += 2;
                    continue;
                }
                if (src[j] == '\n') ++line;
                if (src.substr(j, 3) == "\"\"\"") {
                    j += 3;
                    closed = true;
                    break;
                }
                ++j;
            }
            if (!closed) {
                fail(start, "unterminated text block");
                return out;
            }
            out.tokens.push_back({TokenKind::Literal, start, j, start_line});
            i = j;
            continue;
        }
        if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size() && src[j] != '\n') {
                if (src[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (src[j] == c) {
                    closed = true;
                    ++j;
                    break;
                }
                ++j;
            }
            if (!closed) {
                fail(start, c == '"' ? "unterminated string literal" : "unterminated character literal");
                return out;
            }
            out.tokens.push_back({TokenKind::Literal, start, j, start_line});
            i = j;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size() && ident_part(src[j])) ++j;
            out.tokens.push_back({TokenKind::Identifier, start, j, start_line});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < src.size()) {
                char d = src[j];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    ++j;
                } else if ((d == '+' || d == '-') && (src[j - 1] == 'e' || src[j - 1] == 'E' ||
                                                      src[j - 1] == 'p' || src[j - 1] == 'P')) {
                    ++j;
                } else {
                    break;
                }
            }
            out.tokens.push_back({TokenKind::Literal, start, j, start_line});
            i = j;
            continue;
        }
        out.tokens.push_back({TokenKind::Symbol, start, i + 1, start_line});
        ++i;
    }
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

StripResult strip_documentation(std::string_view source) {
    StripResult result;
    LexResult lexed = lex(source);
    std::string& out = result.text;
    out.reserve(source.size());
    std::size_t cursor = 0;
    for (const auto& tok : lexed.tokens) {
        if (tok.kind != TokenKind::Comment) continue;
        out.append(source.substr(cursor, tok.begin - cursor));

        std::size_t line_start = out.rfind('\n');
        line_start = line_start == std::string::npos ? 0 : line_start + 1;
        bool prefix_blank = is_blank(std::string_view(out).substr(line_start));

        std::size_t nl = source.find('\n', tok.end);
        std::size_t line_end = nl == std::string_view::npos ? source.size() : nl;
        bool suffix_blank = is_blank(source.substr(tok.end, line_end - tok.end));

        if (prefix_blank && suffix_blank) {
            out.erase(line_start);
            cursor = nl == std::string_view::npos ? source.size() : nl + 1;
        } else if (suffix_blank) {
            while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
            cursor = tok.end;
            // Drop the whitespace between the comment and the line break,
            // keeping a CR that belongs to a CRLF ending.
            while (cursor < line_end && (source[cursor] == ' ' || source[cursor] == '\t')) ++cursor;
        } else {
            cursor = tok.end;
            bool space_before = out.empty() || std::isspace(static_cast<unsigned char>(out.back()));
            bool space_after = cursor >= source.size() || std::isspace(static_cast<unsigned char>(source[cursor]));
            if (!space_before && !space_after) out += ' ';
        }
    }
    if (lexed.error_at) {
        // Pass the remainder through untouched.
        std::size_t from = std::min(cursor, *lexed.error_at);
        out.append(source.substr(from));
        result.warnings.push_back(lexed.error + "; remainder left unmodified");
    } else {
        out.append(source.substr(cursor));
    }
    return result;
}

namespace {

const std::set<std::string_view> kNotMethodNames = {"if", "for", "while", "switch", "catch", "synchronized",
                                                    "return", "new", "try", "do", "else"};

std::string slice_lines(const std::vector<std::string_view>& lines, LineSpan span, std::string_view source) {
    std::string out;
    for (int l = span.start_line; l <= span.end_line && l <= static_cast<int>(lines.size()); ++l) {
        out.append(lines[static_cast<std::size_t>(l - 1)]);
        bool last_line_of_file = l == static_cast<int>(lines.size());
        if (!last_line_of_file || (!source.empty() && source.back() == '\n')) out += '\n';
    }
    return out;
}

class UnitParser {
public:
    explicit UnitParser(std::string_view src) : src_(src), lines_(text::split_lines(src)) {}

    Units run() {
        LexResult lexed = lex(src_);
        if (lexed.error_at) units_.diagnostics.push_back("ParseIncomplete: " + lexed.error);
        toks_ = std::move(lexed.tokens);

        scopes_.push_back(Scope{ScopeKind::File, "", false, 0});
        for (std::size_t i = 0; i < toks_.size(); ++i) step(i);
        if (scopes_.size() > 1) {
            units_.diagnostics.push_back("ParseIncomplete: " + std::to_string(scopes_.size() - 1) +
                                         " unclosed block(s) at end of input");
        }

        Units out;
        out.diagnostics = std::move(units_.diagnostics);
        for (std::size_t k = 0; k < classes_.size(); ++k)
            if (class_done_[k]) out.classes.push_back(std::move(classes_[k]));
        for (std::size_t k = 0; k < methods_.size(); ++k)
            if (method_done_[k]) out.methods.push_back(std::move(methods_[k]));
        return out;
    }

private:
    enum class ScopeKind { File, Type, Method, Member, Inline };

    struct Scope {
        Scope(ScopeKind k, std::string n, bool e, std::size_t r) : kind(k), name(std::move(n)), is_enum(e), record(r) {}

        ScopeKind kind;
        std::string name;  // qualified type name for Type scopes
        bool is_enum = false;
        std::size_t record = 0;  // index into classes_/methods_

        // Member-level state (File and Type scopes).
        std::optional<std::size_t> member_first;
        int doc_line = -1;
        int boundary_line = 0;
        int paren = 0;
        bool has_assign = false;
        bool enum_constants_done = false;

        // Brace depth inside Method/Member/Inline scopes.
        int depth = 0;
    };

    std::string_view text(const Token& t) const { return src_.substr(t.begin, t.end - t.begin); }
    bool is_sym(std::size_t i, char c) const {
        return i < toks_.size() && toks_[i].kind == TokenKind::Symbol && src_[toks_[i].begin] == c;
    }
    bool is_ident(std::size_t i) const { return i < toks_.size() && toks_[i].kind == TokenKind::Identifier; }
    bool member_level() const {
        return scopes_.back().kind == ScopeKind::File || scopes_.back().kind == ScopeKind::Type;
    }

    void reset_member(Scope& s, int line) {
        s.member_first.reset();
        s.doc_line = -1;
        s.boundary_line = line;
        s.paren = 0;
        s.has_assign = false;
    }

    void step(std::size_t i) {
        const Token& t = toks_[i];
        Scope& top = scopes_.back();
        if (t.kind == TokenKind::Comment) {
            if (member_level() && !top.member_first && top.doc_line < 0 && t.line > top.boundary_line)
                top.doc_line = t.line;
            return;
        }
        if (!member_level()) {
            if (is_sym(i, '{')) {
                ++top.depth;
            } else if (is_sym(i, '}')) {
                if (top.depth > 0) {
                    --top.depth;
                } else {
                    close_block(i);
                }
            }
            return;
        }

        if (!top.member_first) top.member_first = i;
        if (t.kind != TokenKind::Symbol) return;
        char c = src_[t.begin];
        switch (c) {
            case '(': ++top.paren; break;
            case ')': --top.paren; break;
            case '=':
                if (top.paren == 0) top.has_assign = true;
                break;
            case ';':
                if (top.paren == 0) {
                    if (top.is_enum) top.enum_constants_done = true;
                    reset_member(top, t.line);
                }
                break;
            case '{': open_block(i); break;
            case '}':
                if (top.kind == ScopeKind::File) {
                    units_.diagnostics.push_back("ParseIncomplete: unbalanced '}' at line " + std::to_string(t.line));
                    reset_member(top, t.line);
                } else {
                    close_block(i);
                }
                break;
            default: break;
        }
    }

    // Finds a type keyword in [first, brace) and returns the index of the name.
    std::optional<std::size_t> type_name_index(std::size_t first, std::size_t brace, bool& is_enum) const {
        for (std::size_t k = first; k < brace; ++k) {
            if (!is_ident(k)) continue;
            auto word = text(toks_[k]);
            bool after_dot = k > first && is_sym(k - 1, '.');
            if (after_dot) continue;
            if ((word == "class" || word == "interface" || word == "enum") && is_ident(k + 1)) {
                is_enum = word == "enum";
                return k + 1;
            }
            if (word == "record" && is_ident(k + 1) && (is_sym(k + 2, '(') || is_sym(k + 2, '<')))
                return k + 1;
        }
        return std::nullopt;
    }

    void open_block(std::size_t brace) {
        Scope& top = scopes_.back();
        const int line = toks_[brace].line;
        if (top.paren > 0 || top.has_assign || (top.is_enum && !top.enum_constants_done)) {
            scopes_.push_back(Scope{ScopeKind::Inline, "", false, 0});
            return;
        }
        std::size_t first = *top.member_first;
        int start_line = top.doc_line > 0 ? top.doc_line : toks_[first].line;

        bool is_enum = false;
        if (auto name_idx = type_name_index(first, brace, is_enum)) {
            std::string name = std::string(text(toks_[*name_idx]));
            std::string qualified = top.kind == ScopeKind::Type ? top.name + "." + name : name;
            ClassRecord rec;
            rec.qualified_name = qualified;
            rec.span.start_line = start_line;
            classes_.push_back(std::move(rec));
            class_done_.push_back(false);
            Scope s{ScopeKind::Type, qualified, is_enum, classes_.size() - 1};
            s.boundary_line = line;
            scopes_.push_back(std::move(s));
            return;
        }

        if (top.kind == ScopeKind::Type) {
            if (auto method = method_shape(first, brace)) {
                MethodRecord rec;
                rec.class_name = top.name;
                rec.name = std::string(text(toks_[method->name]));
                rec.parameter_types = parameter_types(method->open_paren, method->close_paren);
                rec.qualified_name = rec.class_name + "#" + rec.name + "(" + text::join(rec.parameter_types, ",") + ")";
                rec.signature = text::collapse_whitespace(
                    strip_documentation(src_.substr(toks_[first].begin, toks_[brace].begin - toks_[first].begin))
                        .text);
                rec.span.start_line = start_line;
                rec.body_open_line = line;
                methods_.push_back(std::move(rec));
                method_done_.push_back(false);
                scopes_.push_back(Scope{ScopeKind::Method, "", false, methods_.size() - 1});
                return;
            }
        }
        scopes_.push_back(Scope{ScopeKind::Member, "", false, 0});
    }

    void close_block(std::size_t brace) {
        Scope closing = std::move(scopes_.back());
        scopes_.pop_back();
        const int line = toks_[brace].line;
        if (closing.kind == ScopeKind::Inline) return;
        if (closing.kind == ScopeKind::Type) {
            auto& rec = classes_[closing.record];
            rec.span.end_line = line;
            rec.body = slice_lines(lines_, rec.span, src_);
            rec.doc_stripped_body = strip_documentation(rec.body).text;
            class_done_[closing.record] = true;
        } else if (closing.kind == ScopeKind::Method) {
            auto& rec = methods_[closing.record];
            rec.span.end_line = line;
            rec.body = slice_lines(lines_, rec.span, src_);
            rec.doc_stripped_body = strip_documentation(rec.body).text;
            method_done_[closing.record] = true;
        }
        reset_member(scopes_.back(), line);
    }

    struct MethodShape {
        std::size_t name, open_paren, close_paren;
    };

    // identifier '(' ... ')' [throws X, Y] '{'
    std::optional<MethodShape> method_shape(std::size_t first, std::size_t brace) const {
        std::size_t close = brace;
        std::size_t k = brace;
        while (k > first) {
            --k;
            if (is_sym(k, ')')) {
                close = k;
                break;
            }
        }
        if (close == brace) return std::nullopt;
        if (close + 1 < brace) {
            if (!is_ident(close + 1) || text(toks_[close + 1]) != "throws") return std::nullopt;
        }
        int depth = 0;
        std::size_t open = close;
        for (std::size_t j = close + 1; j-- > first;) {
            if (is_sym(j, ')')) ++depth;
            if (is_sym(j, '(')) {
                if (--depth == 0) {
                    open = j;
                    break;
                }
            }
        }
        if (open == close || open == first || !is_ident(open - 1)) return std::nullopt;
        if (kNotMethodNames.count(text(toks_[open - 1]))) return std::nullopt;
        return MethodShape{open - 1, open, close};
    }

    std::vector<std::string> parameter_types(std::size_t open, std::size_t close) const {
        std::vector<std::string> out;
        std::vector<std::size_t> current;
        int angle = 0, paren = 0;
        auto flush = [&] {
            if (!current.empty()) out.push_back(parameter_type(current));
            current.clear();
        };
        for (std::size_t k = open + 1; k < close; ++k) {
            if (toks_[k].kind == TokenKind::Comment) continue;
            if (is_sym(k, '<')) ++angle;
            if (is_sym(k, '>')) --angle;
            if (is_sym(k, '(')) ++paren;
            if (is_sym(k, ')')) --paren;
            if (is_sym(k, ',') && angle == 0 && paren == 0) {
                flush();
                continue;
            }
            current.push_back(k);
        }
        flush();
        return out;
    }

    std::string parameter_type(const std::vector<std::size_t>& toks) const {
        std::vector<std::size_t> kept;
        for (std::size_t p = 0; p < toks.size(); ++p) {
            std::size_t k = toks[p];
            if (is_sym(k, '@')) {
                // Skip the annotation name and its argument list.
                ++p;
                while (p + 2 < toks.size() && is_sym(toks[p + 1], '.') && is_ident(toks[p + 2])) p += 2;
                if (p + 1 < toks.size() && is_sym(toks[p + 1], '(')) {
                    int depth = 0;
                    for (++p; p < toks.size(); ++p) {
                        if (is_sym(toks[p], '(')) ++depth;
                        if (is_sym(toks[p], ')') && --depth == 0) break;
                    }
                }
                continue;
            }
            if (is_ident(k) && text(toks_[k]) == "final") continue;
            kept.push_back(k);
        }
        // Trailing dims after the name (int a[]).
        std::string dims;
        while (kept.size() >= 2 && is_sym(kept.back(), ']') && is_sym(kept[kept.size() - 2], '[')) {
            dims += "[]";
            kept.resize(kept.size() - 2);
        }
        if (kept.size() >= 2 && is_ident(kept.back())) kept.pop_back();
        std::string type;
        for (std::size_t p = 0; p < kept.size(); ++p) {
            const Token& tok = toks_[kept[p]];
            if (p > 0) {
                const Token& prev = toks_[kept[p - 1]];
                bool prev_word = prev.kind != TokenKind::Symbol || src_[prev.begin] == '?';
                if (prev_word && tok.kind != TokenKind::Symbol) type += ' ';
            }
            type += text(tok);
        }
        return type + dims;
    }

    std::string_view src_;
    std::vector<std::string_view> lines_;
    std::vector<Token> toks_;
    std::vector<Scope> scopes_;
    std::vector<ClassRecord> classes_;
    std::vector<bool> class_done_;
    std::vector<MethodRecord> methods_;
    std::vector<bool> method_done_;
    Units units_;
};

}  // namespace

std::string MethodRecord::identity() const {
    return class_name + "#" + name + "/" + std::to_string(parameter_types.size());
}

Units extract_units(std::string_view source) { return UnitParser(source).run(); }

std::string_view to_string(UnitStatus status) {
    switch (status) {
        case UnitStatus::Added: return "added";
        case UnitStatus::Deleted: return "deleted";
        case UnitStatus::Modified: return "modified";
    }
    return "modified";
}

std::string_view to_string(MethodChangeKind kind) {
    switch (kind) {
        case MethodChangeKind::SignatureChanged: return "signature changed";
        case MethodChangeKind::LinesAdded: return "lines added";
        case MethodChangeKind::LinesRemoved: return "lines removed";
        case MethodChangeKind::LinesReplaced: return "lines replaced";
    }
    return "lines replaced";
}

std::map<UnitRef, UnitStatus> AffectedUnits::status_map() const {
    std::map<UnitRef, UnitStatus> out;
    for (const auto& [ref, change] : classes) out.emplace(ref, change.status);
    for (const auto& [ref, change] : methods) out.emplace(ref, change.status);
    return out;
}

bool is_java_path(std::string_view path) {
    return path.size() > 5 && path.substr(path.size() - 5) == ".java";
}

namespace {

bool overlaps(const narrator::ChangeItem& item, const std::optional<LineSpan>& pre, const std::optional<LineSpan>& post) {
    if (pre) {
        for (const auto& l : item.removed_lines)
            if (pre->contains(l.lineno)) return true;
    }
    if (post) {
        for (const auto& l : item.added_lines)
            if (post->contains(l.lineno)) return true;
    }
    return false;
}

// Keys records by `key`; records whose key repeats on the same side fall
// back to `fallback` so overloads of equal arity stay distinct.
template <typename Record, typename Key, typename Fallback>
std::map<std::string, const Record*> index_records(const std::vector<Record>& records, Key key, Fallback fallback) {
    std::map<std::string, int> counts;
    for (const auto& r : records) ++counts[key(r)];
    std::map<std::string, const Record*> out;
    for (const auto& r : records) {
        std::string k = counts[key(r)] > 1 ? fallback(r) : key(r);
        out.emplace(k, &r);
    }
    return out;
}

template <typename Record, typename Key, typename Fallback>
void pair_units(const std::vector<Record>& pre, const std::vector<Record>& post, const std::string& path,
                UnitKind kind, const std::vector<narrator::ChangeItem>& items, Key key, Fallback fallback,
                std::map<UnitRef, UnitChange<Record>>& out) {
    auto pre_index = index_records(pre, key, fallback);
    auto post_index = index_records(post, key, fallback);
    std::set<std::string> keys;
    for (const auto& [k, _] : pre_index) keys.insert(k);
    for (const auto& [k, _] : post_index) keys.insert(k);

    for (const auto& k : keys) {
        const Record* a = pre_index.count(k) ? pre_index[k] : nullptr;
        const Record* b = post_index.count(k) ? post_index[k] : nullptr;
        std::optional<LineSpan> pre_span = a ? std::optional(a->span) : std::nullopt;
        std::optional<LineSpan> post_span = b ? std::optional(b->span) : std::nullopt;
        UnitChange<Record> change;
        for (const auto& item : items)
            if (overlaps(item, pre_span, post_span)) change.items.push_back(item);
        if (a && b) {
            if (change.items.empty()) continue;
            change.status = UnitStatus::Modified;
        } else {
            change.status = a ? UnitStatus::Deleted : UnitStatus::Added;
        }
        if (a) change.pre = *a;
        if (b) change.post = *b;
        out.emplace(UnitRef{kind, path, change.current().qualified_name}, std::move(change));
    }
}

}  // namespace

AffectedUnits affected_units(const diff::UnifiedDiff& diff, const SourceMap& pre_sources,
                             const SourceMap& post_sources) {
    AffectedUnits out;
    auto all_items = narrator::extract_change_items(diff);
    for (const auto& file : diff.files) {
        if (file.is_binary) continue;
        bool has_pre = file.status != diff::FileStatus::Added && is_java_path(file.old_path);
        bool has_post = file.status != diff::FileStatus::Deleted && is_java_path(file.new_path);
        if (!has_pre && !has_post) continue;

        std::string_view pre_text, post_text;
        if (has_pre) {
            auto it = pre_sources.find(file.old_path);
            if (it == pre_sources.end()) throw MissingSource(file.old_path);
            pre_text = it->second;
        }
        if (has_post) {
            auto it = post_sources.find(file.new_path);
            if (it == post_sources.end()) throw MissingSource(file.new_path);
            post_text = it->second;
        }
        Units pre_units = has_pre ? extract_units(pre_text) : Units{};
        Units post_units = has_post ? extract_units(post_text) : Units{};
        for (auto& d : pre_units.diagnostics) out.diagnostics.push_back(file.old_path + " (pre): " + d);
        for (auto& d : post_units.diagnostics) out.diagnostics.push_back(file.new_path + " (post): " + d);

        std::vector<narrator::ChangeItem> items;
        for (const auto& item : all_items)
            if (item.file == file.path()) items.push_back(item);

        const std::string& path = file.path();
        pair_units(
            pre_units.classes, post_units.classes, path, UnitKind::Class, items,
            [](const ClassRecord& r) { return r.qualified_name; },
            [](const ClassRecord& r) { return r.qualified_name; }, out.classes);
        pair_units(
            pre_units.methods, post_units.methods, path, UnitKind::Method, items,
            [](const MethodRecord& r) { return r.identity(); },
            [](const MethodRecord& r) { return r.qualified_name; }, out.methods);
    }
    return out;
}

namespace {

std::string describe_item(const narrator::ChangeItem& item) {
    std::string out;
    switch (item.kind) {
        case narrator::ChunkKind::Addition:
            out = "Lines added at new " + narrator::describe_lines(item.added_lines) + ":\n";
            break;
        case narrator::ChunkKind::Removal:
            out = "Lines removed at old " + narrator::describe_lines(item.removed_lines) + ":\n";
            break;
        case narrator::ChunkKind::Replacement:
            out = "Lines replaced at old " + narrator::describe_lines(item.removed_lines) + " / new " +
                  narrator::describe_lines(item.added_lines) + ":\n";
            break;
    }
    for (const auto& l : item.removed_lines) out += "  - " + l.content + "\n";
    for (const auto& l : item.added_lines) out += "  + " + l.content + "\n";
    return out;
}

}  // namespace

std::vector<MethodChange> method_change_list(const MethodRecord& pre, const MethodRecord& post,
                                             const std::vector<narrator::ChangeItem>& items) {
    if (pre.class_name != post.class_name || pre.name != post.name)
        throw std::invalid_argument("method_change_list: '" + pre.qualified_name + "' and '" + post.qualified_name +
                                    "' are different methods");
    std::vector<MethodChange> out;
    bool signature_changed = text::collapse_whitespace(pre.signature) != text::collapse_whitespace(post.signature);
    if (signature_changed) {
        out.push_back({MethodChangeKind::SignatureChanged,
                       "Signature changed from `" + pre.signature + "` to `" + post.signature + "`.",
                       {}});
    }
    const LineSpan pre_decl{pre.span.start_line, pre.body_open_line};
    const LineSpan post_decl{post.span.start_line, post.body_open_line};
    for (const auto& item : items) {
        if (!overlaps(item, pre.span, post.span)) continue;
        bool in_declaration =
            std::all_of(item.removed_lines.begin(), item.removed_lines.end(),
                        [&](const auto& l) { return pre_decl.contains(l.lineno); }) &&
            std::all_of(item.added_lines.begin(), item.added_lines.end(),
                        [&](const auto& l) { return post_decl.contains(l.lineno); });
        if (signature_changed && in_declaration) {
            out.front().items.push_back(item);
            continue;
        }
        MethodChangeKind kind = item.kind == narrator::ChunkKind::Addition  ? MethodChangeKind::LinesAdded
                                : item.kind == narrator::ChunkKind::Removal ? MethodChangeKind::LinesRemoved
                                                                            : MethodChangeKind::LinesReplaced;
        out.push_back({kind, describe_item(item), {item}});
    }
    return out;
}

std::string render_change_list(const std::vector<MethodChange>& changes) {
    std::string out;
    for (std::size_t i = 0; i < changes.size(); ++i) {
        out += std::to_string(i + 1) + ". [" + std::string(to_string(changes[i].kind)) + "] ";
        out += changes[i].detail;
        if (out.back() != '\n') out += '\n';
    }
    return out;
}

}  // namespace omega::java
