#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "omega/diff.hpp"
#include "omega/narrator.hpp"

// Lexical (not grammatical) analysis of Java sources. Good enough to locate
// classes and methods in code that may not compile.
namespace omega::java {

struct LineSpan {
    int start_line = 0;  // 1-based, inclusive
    int end_line = 0;

    bool contains(int line) const { return line >= start_line && line <= end_line; }
    friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

struct StripResult {
    std::string text;
    /// Non-empty when an unterminated literal or comment was found; the
    /// input from that point on is passed through unmodified.
    std::vector<std::string> warnings;
};

/// Removes `//`, `/* */` and `/** */` comments. Literals are untouched. A
/// comment that fills its lines deletes those lines; a trailing comment is
/// cut together with the whitespace before it.
StripResult strip_documentation(std::string_view source);

struct ClassRecord {
    std::string qualified_name;  // Outer.Inner
    std::string body;            // the span lines, verbatim
    LineSpan span;
    std::string doc_stripped_body;
};

struct MethodRecord {
    std::string qualified_name;  // Outer.Inner#name(T1,T2)
    std::string class_name;      // Outer.Inner
    std::string name;
    std::vector<std::string> parameter_types;
    std::string signature;  // declaration up to the body, whitespace-collapsed
    std::string body;
    LineSpan span;
    int body_open_line = 0;  // line holding the opening brace
    std::string doc_stripped_body;

    /// Class, name and arity: the key used to pair methods across commits.
    std::string identity() const;
};

struct Units {
    std::vector<ClassRecord> classes;
    std::vector<MethodRecord> methods;
    /// ParseIncomplete diagnostics; units found before the problem are kept.
    std::vector<std::string> diagnostics;
};

/// Brace-matched extraction of member types and methods. Abstract and
/// interface methods without a body are skipped; constructors are methods.
Units extract_units(std::string_view source);

enum class UnitKind { Class, Method };
enum class UnitStatus { Added, Deleted, Modified };

std::string_view to_string(UnitStatus status);

struct UnitRef {
    UnitKind kind = UnitKind::Class;
    std::string path;
    std::string name;

    friend auto operator<=>(const UnitRef&, const UnitRef&) = default;
};

template <typename Record>
struct UnitChange {
    UnitStatus status = UnitStatus::Modified;
    std::optional<Record> pre;
    std::optional<Record> post;
    /// Change items overlapping the pre- or post-commit span.
    std::vector<narrator::ChangeItem> items;

    /// The post-commit record unless the unit was deleted.
    const Record& current() const { return post ? *post : *pre; }
};

struct AffectedUnits {
    std::map<UnitRef, UnitChange<ClassRecord>> classes;
    std::map<UnitRef, UnitChange<MethodRecord>> methods;
    std::vector<std::string> diagnostics;

    std::map<UnitRef, UnitStatus> status_map() const;
    bool empty() const { return classes.empty() && methods.empty(); }
};

using SourceMap = std::map<std::string, std::string, std::less<>>;

bool is_java_path(std::string_view path);

/// Classifies units touched by the diff. Throws MissingSource when a Java
/// file's pre or post text is absent (added files need no pre text,
/// deleted files no post text).
AffectedUnits affected_units(const diff::UnifiedDiff& diff, const SourceMap& pre_sources,
                             const SourceMap& post_sources);

enum class MethodChangeKind { SignatureChanged, LinesAdded, LinesRemoved, LinesReplaced };

std::string_view to_string(MethodChangeKind kind);

struct MethodChange {
    MethodChangeKind kind = MethodChangeKind::LinesReplaced;
    std::string detail;
    std::vector<narrator::ChangeItem> items;
};

/// Describes how `pre` became `post`. Items confined to the declaration
/// lines are folded into SignatureChanged when the signature differs.
std::vector<MethodChange> method_change_list(const MethodRecord& pre, const MethodRecord& post,
                                             const std::vector<narrator::ChangeItem>& items);

/// The change list as a numbered plain-text list, for prompts.
std::string render_change_list(const std::vector<MethodChange>& changes);

}  // namespace omega::java
