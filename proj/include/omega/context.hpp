#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "omega/diff.hpp"
#include "omega/fidex.hpp"
#include "omega/java.hpp"
#include "omega/llm.hpp"

// Assembly of the commit context handed to the generator: issues, pull
// requests, file importance, maintenance activity, method and class summaries.
namespace omega::context {

// ---------------------------------------------------------------------------
// Multi-intent summaries

enum class Aspect { What, Why, HowToUse, HowItIsDone, Property };

inline constexpr std::array<Aspect, 5> kAspects = {Aspect::What, Aspect::Why, Aspect::HowToUse,
                                                   Aspect::HowItIsDone, Aspect::Property};
inline constexpr std::string_view kNotApplicable = "not applicable";

/// "What", "Why", "How-to-use", "How-it-is-done", "Property".
std::string_view label(Aspect aspect);

struct AspectTexts {
    std::string what{kNotApplicable};
    std::string why{kNotApplicable};
    std::string how_to_use{kNotApplicable};
    std::string how_it_is_done{kNotApplicable};
    std::string property{kNotApplicable};

    std::string& operator[](Aspect aspect);
    const std::string& operator[](Aspect aspect) const;

    friend bool operator==(const AspectTexts&, const AspectTexts&) = default;
};

/// The five intents of a method.
struct MultiIntentSummary : AspectTexts {};

/// How an upcoming change list affects each intent of the pre-commit method.
struct ChangeImpactSummary : AspectTexts {};

/// Separate summaries of the pre- and post-commit bodies, used for modified
/// methods when change-based summarization is off.
struct BeforeAfterSummary {
    MultiIntentSummary before;
    MultiIntentSummary after;
};

using MethodSummary = std::variant<MultiIntentSummary, ChangeImpactSummary, BeforeAfterSummary>;

/// Parses labeled aspect sections ("What: ..."). Missing aspects become
/// "not applicable". Throws UnparseableSummary when fewer than
/// `min_aspects` labels are present.
AspectTexts parse_aspects(std::string_view reply, int min_aspects = 3);

/// One "Label: text" line per aspect.
std::string render_aspects(const AspectTexts& texts);

// ---------------------------------------------------------------------------
// Maintenance activity

enum class Activity { Corrective, Perfective, Adaptive };
enum class HeaderTag { Fix, Feat, Refactor, Style };

struct ActivityType {
    Activity value = Activity::Corrective;
    HeaderTag header_tag = HeaderTag::Fix;

    friend bool operator==(const ActivityType&, const ActivityType&) = default;
};

std::string_view to_string(Activity activity);
std::string_view to_string(HeaderTag tag);
std::optional<HeaderTag> header_tag_from_string(std::string_view s);
std::optional<Activity> activity_from_string(std::string_view s);

/// fix -> Corrective, feat -> Adaptive, refactor and style -> Perfective.
ActivityType activity_for(HeaderTag tag);

/// Lowercases and strips surrounding whitespace, quotes and punctuation,
/// then maps to a tag if the remainder is exactly one.
std::optional<HeaderTag> normalize_label(std::string_view reply);

// ---------------------------------------------------------------------------
// Issues and pull requests

struct Issue {
    std::string id;
    std::string title;
    std::string body;
    std::string state;
};

struct PullRequest {
    std::string id;
    std::string title;
    std::string body;
    std::string branch;
};

struct FixtureIssueSource {
    std::vector<Issue> issues;
    std::vector<PullRequest> pull_requests;
};

/// Read-only GitHub REST lookups.
struct GitHubSource {
    std::string api_base = "https://api.github.com";
    std::string slug;  // owner/repo
    std::string token;
};

using IssueSource = std::variant<std::monostate, FixtureIssueSource, GitHubSource>;

struct IssuePrContext {
    std::vector<Issue> issues;
    std::vector<PullRequest> pull_requests;
    std::vector<std::string> warnings;
};

/// Fixture sources are returned verbatim. GitHub sources find pull requests
/// by commit SHA and issues by `#NNN` references in their titles, bodies and
/// branch names. An unavailable source yields empty lists and a warning.
IssuePrContext fetch_issue_pr_context(const std::string& commit_ref, const IssueSource& source);

/// Issue numbers referenced by `#NNN` in titles and bodies, or by a number
/// delimited by '/', '-' or '_' in branch names; ascending, unique.
std::vector<std::string> referenced_issue_ids(const std::vector<PullRequest>& pull_requests);

// ---------------------------------------------------------------------------
// File importance

struct FileImportance {
    std::string path;
    double score = 0;
};

/// Churn (added + removed lines) over total churn, descending, ties by path.
/// Falls back to equal shares when nothing has line churn (binary-only or
/// rename-only diffs).
std::vector<FileImportance> file_importance(const diff::UnifiedDiff& diff);

// ---------------------------------------------------------------------------
// LLM-derived pieces

struct TokenLimits {
    int summary = 512;
    int classification = 32;
    int explanation = 1024;
    int message = 1024;
};

struct ModelSettings {
    std::string model;
    TokenLimits max_tokens;

    llm::CompletionParams params(int max_tokens) const { return {model, 0.0, max_tokens}; }
};

/// Asks for exactly one of the four header tags; retries once with the
/// constraint restated. Throws UnrecognizedLabel.
ActivityType classify_activity(std::string_view changes, const std::vector<std::string>& files,
                               llm::ChatClient& client, const ModelSettings& settings);

/// Few-shot multi-intent summary of a method body. Throws UnparseableSummary.
MultiIntentSummary mms(std::string_view method_body, llm::ChatClient& client, const ModelSettings& settings);

/// Per-aspect impact of `changes` on the pre-commit summary. Throws
/// std::invalid_argument for an empty change list, UnparseableSummary on a
/// reply with too few aspects.
ChangeImpactSummary cmms(const MultiIntentSummary& pre_summary, const std::vector<java::MethodChange>& changes,
                         llm::ChatClient& client, const ModelSettings& settings);

/// Keeps the first and last parts of `text` within `budget` bytes and marks the cut.
std::string truncate_head_tail(std::string_view text, std::size_t budget);

/// Zero-shot class summary; the body is cut to `char_budget` first.
std::string summarize_class(std::string_view class_body, std::size_t char_budget, llm::ChatClient& client,
                            const ModelSettings& settings);

// ---------------------------------------------------------------------------
// Commit input and assembly

struct CommitInput {
    std::string sha;
    std::string diff_text;
    java::SourceMap pre_sources;
    java::SourceMap post_sources;
    IssueSource issue_source;
};

/// Fixture document: {sha, diff_path | diff, issues[], pull_requests[],
/// pre_sources{}, post_sources{}}. diff_path is relative to the fixture.
/// Absent issues and pull_requests keys mean no issue source.
CommitInput load_fixture(const std::string& path);

/// Reads the diff and the pre/post text of every Java file through git.
CommitInput load_from_repo(const std::string& repo, const std::string& sha, IssueSource issue_source = {});

struct AssembleOptions {
    bool use_cmms = true;
    bool strip_docs = true;
    bool use_fidex = true;
    fidex::Mode fidex_mode = fidex::Mode::SingleCall;
    std::size_t class_char_budget = 12000;
    /// Concurrent summary requests.
    int parallelism = 1;
};

/// Context configurations compared in the ablation study.
enum class Arm {
    SameAsOmg,              // documentation kept, MMS, raw diff
    OmgMinusDocumentation,  // documentation stripped
    MmsReplacedByCmms,      // CMMS for modified methods
    Refined,                // both refinements
    Omega,                  // refined plus the FIDEX explanation
};

AssembleOptions options_for(Arm arm, AssembleOptions base = {});
std::string_view to_string(Arm arm);

struct MethodSummaryEntry {
    java::UnitStatus status = java::UnitStatus::Modified;
    std::string path;
    MethodSummary summary;
};

struct ClassSummaryEntry {
    java::UnitStatus status = java::UnitStatus::Modified;
    std::string path;
    std::string summary;
};

struct CommitContext {
    std::string sha;
    diff::UnifiedDiff diff;
    std::optional<std::string> diff_explanation;
    std::vector<Issue> issues;
    std::vector<PullRequest> pull_requests;
    std::vector<FileImportance> file_importance;
    std::optional<ActivityType> activity;
    std::map<std::string, MethodSummaryEntry> method_summaries;  // by qualified name
    std::map<std::string, ClassSummaryEntry> class_summaries;
    std::vector<std::string> warnings;
};

/// Runs parsing, unit analysis, summaries, classification and (optionally)
/// FIDEX. Failures of optional pieces become warnings; a diff that does not
/// parse, a missing source and transport errors propagate.
CommitContext assemble_context(const CommitInput& input, const AssembleOptions& options, llm::ChatClient& client,
                               const ModelSettings& settings);

// ---------------------------------------------------------------------------
// Classifier validation against a labeled dataset

struct LabeledCommit {
    std::string commit_id;
    Activity label = Activity::Corrective;
    std::string diff_text;
};

/// JSON lines {commit_id, label: Corrective|Perfective|Adaptive, diff | diff_path};
/// diff_path is relative to `base_dir`.
std::vector<LabeledCommit> load_labeled_dataset(std::string_view jsonl, const std::string& base_dir);

struct ClassifierValidation {
    std::size_t total = 0;
    std::size_t correct = 0;
    std::size_t unrecognized = 0;
    std::map<std::string, std::map<std::string, std::size_t>> confusion;  // label -> predicted -> count

    double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

ClassifierValidation validate_classifier(const std::vector<LabeledCommit>& commits, llm::ChatClient& client,
                                         const ModelSettings& settings);

}  // namespace omega::context
