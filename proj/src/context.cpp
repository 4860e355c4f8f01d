#include "omega/context.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <filesystem>
#include <functional>
#include <regex>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "omega/error.hpp"
#include "omega/git.hpp"
#include "omega/narrator.hpp"
#include "omega/resources.hpp"
#include "omega/text.hpp"

namespace omega::context {

using nlohmann::json;

namespace {

std::string prompt(std::string_view name) {
    return std::string(text::trim_right(resources::get(name)));
}

template <typename... KV>
std::string fill(std::string_view tmpl, const KV&... kv) {
    const std::pair<std::string_view, const std::string*> table[] = {{kv.first, &kv.second}...};
    return text::substitute(tmpl, [&](std::string_view name) -> const std::string* {
        for (const auto& [k, v] : table) {
            if (k == name) return v;
        }
        return nullptr;
    });
}

using Var = std::pair<std::string_view, std::string>;

const std::regex& heading_regex() {
    static const std::regex re(
        R"(^\s*(?:[-*]\s+|\d+[.)]\s+)?(?:\*\*|__)?(what|why|how[- ]to[- ]use|how[- ]it[- ]is[- ]done|property)(?:\*\*|__)?\s*:(?:\*\*|__)?\s*(.*)$)",
        std::regex::icase | std::regex::ECMAScript);
    return re;
}

Aspect aspect_from_heading(std::string_view heading) {
    std::string h = text::to_lower(heading);
    if (h == "what") return Aspect::What;
    if (h == "why") return Aspect::Why;
    if (h == "property") return Aspect::Property;
    if (h.find("use") != std::string::npos) return Aspect::HowToUse;
    return Aspect::HowItIsDone;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view label(Aspect aspect) {
    switch (aspect) {
        case Aspect::What: return "What";
        case Aspect::Why: return "Why";
        case Aspect::HowToUse: return "How-to-use";
        case Aspect::HowItIsDone: return "How-it-is-done";
        case Aspect::Property: return "Property";
    }
    return "?";
}

std::string& AspectTexts::operator[](Aspect aspect) {
    switch (aspect) {
        case Aspect::What: return what;
        case Aspect::Why: return why;
        case Aspect::HowToUse: return how_to_use;
        case Aspect::HowItIsDone: return how_it_is_done;
        case Aspect::Property: break;
    }
    return property;
}

const std::string& AspectTexts::operator[](Aspect aspect) const {
    return const_cast<AspectTexts&>(*this)[aspect];
}

AspectTexts parse_aspects(std::string_view reply, int min_aspects) {
    AspectTexts out;
    std::set<Aspect> seen;
    std::optional<Aspect> current;
    std::string buffer;

    auto flush = [&] {
        if (current && !seen.count(*current)) {
            std::string value = text::collapse_whitespace(buffer);
            out[*current] = value.empty() ? std::string(kNotApplicable) : value;
            seen.insert(*current);
        }
        buffer.clear();
    };

    for (auto line : text::split_lines(reply)) {
        std::string l(text::trim_right(line));
        std::smatch m;
        if (std::regex_match(l, m, heading_regex())) {
            flush();
            current = aspect_from_heading(m[1].str());
            buffer = m[2].str();
        } else if (current) {
            buffer += '\n';
            buffer += l;
        }
    }
    flush();

    if (static_cast<int>(seen.size()) < min_aspects) {
        throw UnparseableSummary("summary has " + std::to_string(seen.size()) + " labeled aspects, expected at least " +
                                 std::to_string(min_aspects));
    }
    return out;
}

std::string render_aspects(const AspectTexts& texts) {
    std::string out;
    for (Aspect a : kAspects) {
        out += label(a);
        out += ": ";
        out += texts[a];
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Activity activity) {
    switch (activity) {
        case Activity::Corrective: return "Corrective";
        case Activity::Perfective: return "Perfective";
        case Activity::Adaptive: return "Adaptive";
    }
    return "?";
}

std::string_view to_string(HeaderTag tag) {
    switch (tag) {
        case HeaderTag::Fix: return "fix";
        case HeaderTag::Feat: return "feat";
        case HeaderTag::Refactor: return "refactor";
        case HeaderTag::Style: return "style";
    }
    return "?";
}

std::optional<HeaderTag> header_tag_from_string(std::string_view s) {
    if (s == "fix") return HeaderTag::Fix;
    if (s == "feat") return HeaderTag::Feat;
    if (s == "refactor") return HeaderTag::Refactor;
    if (s == "style") return HeaderTag::Style;
    return std::nullopt;
}

std::optional<Activity> activity_from_string(std::string_view s) {
    std::string l = text::to_lower(text::trim(s));
    if (l == "corrective") return Activity::Corrective;
    if (l == "perfective") return Activity::Perfective;
    if (l == "adaptive") return Activity::Adaptive;
    return std::nullopt;
}

ActivityType activity_for(HeaderTag tag) {
    switch (tag) {
        case HeaderTag::Fix: return {Activity::Corrective, tag};
        case HeaderTag::Feat: return {Activity::Adaptive, tag};
        case HeaderTag::Refactor:
        case HeaderTag::Style: break;
    }
    return {Activity::Perfective, tag};
}

std::optional<HeaderTag> normalize_label(std::string_view reply) {
    std::string s = text::to_lower(text::trim(reply));
    auto keep = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    auto first = std::find_if(s.begin(), s.end(), keep);
    auto last = std::find_if(s.rbegin(), s.rend(), keep).base();
    if (first >= last) return std::nullopt;
    return header_tag_from_string(std::string(first, last));
}

// ---------------------------------------------------------------------------

namespace {

struct UrlParts {
    std::string host;  // scheme://host[:port]
    std::string prefix;
};

UrlParts split_url(const std::string& base) {
    auto scheme_end = base.find("://");
    auto path_start = base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {base, ""};
    std::string prefix = base.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base.substr(0, path_start), prefix};
}

std::string json_text(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return "";
    if (j[key].is_string()) return j[key].get<std::string>();
    return j[key].dump();
}

// Hosting APIs carry both a global "id" and the per-repository "number";
// the number is the one people write as #NNN.
std::string id_of(const json& j) {
    auto number = json_text(j, "number");
    return number.empty() ? json_text(j, "id") : number;
}

Issue issue_from_json(const json& j) {
    return {id_of(j), json_text(j, "title"), json_text(j, "body"), json_text(j, "state")};
}

PullRequest pr_from_json(const json& j) {
    PullRequest pr{id_of(j), json_text(j, "title"), json_text(j, "body"), json_text(j, "branch")};
    if (pr.branch.empty() && j.contains("head") && j["head"].is_object()) pr.branch = json_text(j["head"], "ref");
    return pr;
}

IssuePrContext fetch_github(const std::string& sha, const GitHubSource& gh) {
    IssuePrContext out;
    auto url = split_url(gh.api_base);
    httplib::Client cli(url.host);
    cli.set_connection_timeout(10);
    cli.set_read_timeout(30);
    httplib::Headers headers{{"Accept", "application/vnd.github+json"}, {"User-Agent", "omega-cmg"}};
    if (!gh.token.empty()) headers.emplace("Authorization", "Bearer " + gh.token);

    auto get = [&](const std::string& path) -> std::optional<json> {
        auto res = cli.Get(url.prefix + path, headers);
        if (!res) {
            out.warnings.push_back("issue/PR source unavailable: " + httplib::to_string(res.error()));
            return std::nullopt;
        }
        if (res->status != 200) {
            out.warnings.push_back("issue/PR source returned HTTP " + std::to_string(res->status) + " for " + path);
            return std::nullopt;
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            out.warnings.push_back("issue/PR source sent invalid JSON for " + path + ": " + e.what());
            return std::nullopt;
        }
    };

    auto pulls = get("/repos/" + gh.slug + "/commits/" + sha + "/pulls");
    if (!pulls || !pulls->is_array()) return out;
    for (const auto& j : *pulls) out.pull_requests.push_back(pr_from_json(j));
    for (const auto& id : referenced_issue_ids(out.pull_requests)) {
        auto issue = get("/repos/" + gh.slug + "/issues/" + id);
        if (!issue || issue->contains("pull_request")) continue;
        out.issues.push_back(issue_from_json(*issue));
    }
    return out;
}

}  // namespace

IssuePrContext fetch_issue_pr_context(const std::string& commit_ref, const IssueSource& source) {
    if (const auto* fixture = std::get_if<FixtureIssueSource>(&source)) {
        return {fixture->issues, fixture->pull_requests, {}};
    }
    if (const auto* gh = std::get_if<GitHubSource>(&source)) {
        return fetch_github(commit_ref, *gh);
    }
    return {{}, {}, {"no issue/PR source configured; issues and pull requests are empty"}};
}

std::vector<std::string> referenced_issue_ids(const std::vector<PullRequest>& pull_requests) {
    static const std::regex hash_ref(R"(#(\d+))");
    static const std::regex branch_ref(R"((?:^|[/_-])(\d+)(?=$|[/_-]))");
    std::set<unsigned long long> ids;
    auto scan = [&](const std::string& s, const std::regex& re) {
        for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
            auto digits = (*it)[1].str();
            if (digits.size() <= 18) ids.insert(std::stoull(digits));
        }
    };
    for (const auto& pr : pull_requests) {
        scan(pr.title, hash_ref);
        scan(pr.body, hash_ref);
        scan(pr.branch, branch_ref);
    }
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(std::to_string(id));
    return out;
}

// ---------------------------------------------------------------------------

std::vector<FileImportance> file_importance(const diff::UnifiedDiff& diff) {
    std::vector<std::pair<std::string, std::size_t>> churn;
    std::size_t total = 0;
    for (const auto& file : diff.files) {
        std::size_t c = 0;
        for (const auto& hunk : file.hunks) {
            for (const auto& line : hunk.lines) {
                if (line.kind != diff::LineKind::Context) ++c;
            }
        }
        churn.emplace_back(file.path(), c);
        total += c;
    }
    std::vector<FileImportance> out;
    for (const auto& [path, c] : churn) {
        double score = total == 0 ? 1.0 / static_cast<double>(churn.size())
                                  : static_cast<double>(c) / static_cast<double>(total);
        out.push_back({path, score});
    }
    // Sort on the integer churn so equal churn always ties exactly.
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (churn[a].second != churn[b].second) return churn[a].second > churn[b].second;
        return churn[a].first < churn[b].first;
    });
    std::vector<FileImportance> sorted;
    for (auto i : order) sorted.push_back(out[i]);
    return sorted;
}

// ---------------------------------------------------------------------------

ActivityType classify_activity(std::string_view changes, const std::vector<std::string>& files,
                               llm::ChatClient& client, const ModelSettings& settings) {
    std::string file_list;
    for (const auto& f : files) file_list += "- " + f + "\n";
    if (file_list.empty()) file_list = "(none)\n";
    llm::Conversation conv;
    conv.system(prompt("prompts/classify/system.txt"))
        .user(fill(prompt("prompts/classify/user.txt"), Var{"files", std::string(text::trim_right(file_list))},
                   Var{"changes", std::string(text::trim_right(changes))}));
    auto params = settings.params(settings.max_tokens.classification);
    std::string reply = client.complete(conv, params);
    if (auto tag = normalize_label(reply)) return activity_for(*tag);

    conv.assistant(reply).user(prompt("prompts/classify/retry.txt"));
    std::string second = client.complete(conv, params);
    if (auto tag = normalize_label(second)) return activity_for(*tag);
    throw UnrecognizedLabel("activity classifier replied '" + std::string(text::trim(second)) +
                            "', not one of fix, feat, refactor, style");
}

namespace {

struct Exemplar {
    std::string method;
    std::string summary;
};

const std::vector<Exemplar>& mms_exemplars() {
    static const std::vector<Exemplar> exemplars = [] {
        std::vector<Exemplar> out;
        for (const auto& j : json::parse(resources::get("prompts/mms/examples.json"))) {
            out.push_back({j.at("method").get<std::string>(), j.at("summary").get<std::string>()});
        }
        return out;
    }();
    return exemplars;
}

}  // namespace

MultiIntentSummary mms(std::string_view method_body, llm::ChatClient& client, const ModelSettings& settings) {
    if (text::trim(method_body).empty()) throw std::invalid_argument("mms: empty method body");
    llm::Conversation conv;
    conv.system(prompt("prompts/mms/system.txt"));
    const std::string user_tmpl = prompt("prompts/mms/user.txt");
    for (const auto& ex : mms_exemplars()) {
        conv.user(fill(user_tmpl, Var{"method", std::string(text::trim_right(ex.method))})).assistant(ex.summary);
    }
    conv.user(fill(user_tmpl, Var{"method", std::string(text::trim_right(method_body))}));
    std::string reply = client.complete(conv, settings.params(settings.max_tokens.summary));
    MultiIntentSummary out;
    static_cast<AspectTexts&>(out) = parse_aspects(reply);
    return out;
}

ChangeImpactSummary cmms(const MultiIntentSummary& pre_summary, const std::vector<java::MethodChange>& changes,
                         llm::ChatClient& client, const ModelSettings& settings) {
    if (changes.empty()) throw std::invalid_argument("cmms: empty change list");
    llm::Conversation conv;
    conv.system(prompt("prompts/cmms/system.txt"))
        .user(fill(prompt("prompts/cmms/user.txt"),
                   Var{"summary", std::string(text::trim_right(render_aspects(pre_summary)))},
                   Var{"changes", std::string(text::trim_right(java::render_change_list(changes)))}));
    std::string reply = client.complete(conv, settings.params(settings.max_tokens.summary));
    ChangeImpactSummary out;
    static_cast<AspectTexts&>(out) = parse_aspects(reply);
    return out;
}

std::string truncate_head_tail(std::string_view text, std::size_t budget) {
    if (text.size() <= budget) return std::string(text);
    auto marker = [](std::size_t omitted) {
        return "\n[... " + std::to_string(omitted) + " characters omitted ...]\n";
    };
    std::size_t reserve = marker(text.size()).size();
    if (budget <= reserve) return std::string(text::utf8_prefix(text, budget));
    std::size_t avail = budget - reserve;
    auto head = text::utf8_prefix(text, avail - avail / 2);
    auto tail = text::utf8_suffix(text, avail / 2);
    return std::string(head) + marker(text.size() - head.size() - tail.size()) + std::string(tail);
}

std::string summarize_class(std::string_view class_body, std::size_t char_budget, llm::ChatClient& client,
                            const ModelSettings& settings) {
    llm::Conversation conv;
    conv.system(prompt("prompts/class/system.txt"))
        .user(fill(prompt("prompts/class/user.txt"),
                   Var{"class", std::string(text::trim_right(truncate_head_tail(class_body, char_budget)))}));
    std::string reply(text::trim(client.complete(conv, settings.params(settings.max_tokens.summary))));
    if (reply.empty()) throw EmptyCompletion();
    return reply;
}

// ---------------------------------------------------------------------------

namespace {

void load_sources(const json& doc, const char* key, const std::filesystem::path& dir, java::SourceMap& out) {
    if (!doc.contains(key)) return;
    for (const auto& [path, value] : doc.at(key).items()) {
        if (value.is_string()) {
            out.emplace(path, value.get<std::string>());
        } else if (value.is_object() && value.contains("path")) {
            out.emplace(path, text::read_file((dir / value.at("path").get<std::string>()).string()));
        } else {
            throw Error(std::string("fixture: ") + key + "['" + path + "'] must be text or {\"path\": ...}");
        }
    }
}

}  // namespace

CommitInput load_fixture(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw Error("fixture '" + path + "' is not valid JSON: " + e.what());
    }
    auto dir = std::filesystem::path(path).parent_path();
    CommitInput in;
    try {
        in.sha = doc.value("sha", "");
        if (doc.contains("diff")) {
            in.diff_text = doc.at("diff").get<std::string>();
        } else if (doc.contains("diff_path")) {
            in.diff_text = text::read_file((dir / doc.at("diff_path").get<std::string>()).string());
        } else {
            throw Error("fixture '" + path + "' has neither diff nor diff_path");
        }
        load_sources(doc, "pre_sources", dir, in.pre_sources);
        load_sources(doc, "post_sources", dir, in.post_sources);
        if (doc.contains("issues") || doc.contains("pull_requests")) {
            FixtureIssueSource src;
            for (const auto& j : doc.value("issues", json::array())) src.issues.push_back(issue_from_json(j));
            for (const auto& j : doc.value("pull_requests", json::array()))
                src.pull_requests.push_back(pr_from_json(j));
            in.issue_source = std::move(src);
        }
    } catch (const json::exception& e) {
        throw Error("fixture '" + path + "': " + e.what());
    }
    return in;
}

CommitInput load_from_repo(const std::string& repo, const std::string& sha, IssueSource issue_source) {
    CommitInput in;
    in.sha = sha;
    in.diff_text = git::show_diff(repo, sha);
    in.issue_source = std::move(issue_source);
    auto parsed = diff::parse_unified_diff(in.diff_text);
    for (const auto& file : parsed.files) {
        if (file.is_binary) continue;
        if (file.status != diff::FileStatus::Added && java::is_java_path(file.old_path)) {
            if (auto text = git::show_file(repo, sha + "^", file.old_path)) in.pre_sources.emplace(file.old_path, *text);
        }
        if (file.status != diff::FileStatus::Deleted && java::is_java_path(file.new_path)) {
            if (auto text = git::show_file(repo, sha, file.new_path)) in.post_sources.emplace(file.new_path, *text);
        }
    }
    return in;
}

AssembleOptions options_for(Arm arm, AssembleOptions base) {
    switch (arm) {
        case Arm::SameAsOmg:
            base.strip_docs = false, base.use_cmms = false, base.use_fidex = false;
            break;
        case Arm::OmgMinusDocumentation:
            base.strip_docs = true, base.use_cmms = false, base.use_fidex = false;
            break;
        case Arm::MmsReplacedByCmms:
            base.strip_docs = false, base.use_cmms = true, base.use_fidex = false;
            break;
        case Arm::Refined:
            base.strip_docs = true, base.use_cmms = true, base.use_fidex = false;
            break;
        case Arm::Omega:
            base.strip_docs = true, base.use_cmms = true, base.use_fidex = true;
            break;
    }
    return base;
}

std::string_view to_string(Arm arm) {
    switch (arm) {
        case Arm::SameAsOmg: return "Same as OMG";
        case Arm::OmgMinusDocumentation: return "OMG - Documentation";
        case Arm::MmsReplacedByCmms: return "MMS replaced by CMMS";
        case Arm::Refined: return "Refined";
        case Arm::Omega: return "OMEGA";
    }
    return "?";
}

namespace {

// Errors that mean the endpoint itself is unusable; everything else only
// costs one context piece.
bool is_fatal(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const TransportError&) {
        return true;
    } catch (const EndpointError&) {
        return true;
    } catch (const ReplayMismatch&) {
        return true;
    } catch (...) {
        return false;
    }
}

std::string describe(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown error";
    }
}

struct Job {
    std::string what;  // for warnings
    std::function<void()> run;
    std::exception_ptr error{};
};

void run_jobs(std::vector<Job>& jobs, int parallelism) {
    auto exec = [](Job& job) {
        try {
            job.run();
        } catch (...) {
            job.error = std::current_exception();
        }
    };
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(parallelism, 1)), jobs.size());
    if (workers <= 1) {
        for (auto& job : jobs) exec(job);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) exec(jobs[i]);
        });
    }
    for (auto& t : pool) t.join();
}

constexpr std::size_t kClassifierInputBudget = 16000;

std::vector<std::string> changed_paths(const diff::UnifiedDiff& diff) {
    std::vector<std::string> out;
    for (const auto& f : diff.files) out.push_back(f.path());
    return out;
}

}  // namespace

CommitContext assemble_context(const CommitInput& input, const AssembleOptions& options, llm::ChatClient& client,
                               const ModelSettings& settings) {
    CommitContext ctx;
    ctx.sha = input.sha;
    ctx.diff = diff::parse_unified_diff(input.diff_text);

    auto linked = fetch_issue_pr_context(input.sha, input.issue_source);
    ctx.issues = std::move(linked.issues);
    ctx.pull_requests = std::move(linked.pull_requests);
    for (auto& w : linked.warnings) ctx.warnings.push_back(std::move(w));

    ctx.file_importance = file_importance(ctx.diff);

    auto units = java::affected_units(ctx.diff, input.pre_sources, input.post_sources);
    for (const auto& d : units.diagnostics) ctx.warnings.push_back(d);

    std::vector<Job> jobs;

    // The classifier always reads the narrative, so the FIDEX flag cannot
    // change the activity type.
    const std::string narrative = narrator::render_narrative(ctx.diff).text;
    const auto paths = changed_paths(ctx.diff);
    std::optional<ActivityType> activity;
    jobs.push_back({"activity classification", [&] {
                        activity = classify_activity(truncate_head_tail(narrative, kClassifierInputBudget), paths,
                                                     client, settings);
                    }});

    std::optional<std::string> explanation;
    if (options.use_fidex) {
        jobs.push_back({"diff explanation", [&] {
                            explanation = fidex::explain_diff(ctx.diff, client,
                                                              settings.params(settings.max_tokens.explanation),
                                                              options.fidex_mode)
                                              .text;
                        }});
    }

    auto method_text = [&](const java::MethodRecord& r) -> const std::string& {
        return options.strip_docs ? r.doc_stripped_body : r.body;
    };
    auto class_text = [&](const java::ClassRecord& r) -> const std::string& {
        return options.strip_docs ? r.doc_stripped_body : r.body;
    };

    struct MethodSlot {
        std::string key;
        const java::UnitRef* ref;
        const java::UnitChange<java::MethodRecord>* change;
        std::optional<MethodSummary> summary;
    };
    std::vector<MethodSlot> method_slots;
    method_slots.reserve(units.methods.size());
    for (const auto& [ref, change] : units.methods) {
        method_slots.push_back({change.current().qualified_name, &ref, &change, std::nullopt});
    }
    for (auto& slot : method_slots) {
        jobs.push_back({"summary of method " + slot.key, [&, s = &slot] {
                            const auto& ch = *s->change;
                            if (ch.status != java::UnitStatus::Modified) {
                                s->summary = mms(method_text(ch.current()), client, settings);
                                return;
                            }
                            if (!options.use_cmms) {
                                auto before = mms(method_text(*ch.pre), client, settings);
                                auto after = mms(method_text(*ch.post), client, settings);
                                s->summary = BeforeAfterSummary{std::move(before), std::move(after)};
                                return;
                            }
                            auto changes = java::method_change_list(*ch.pre, *ch.post, ch.items);
                            if (changes.empty()) {
                                s->summary = mms(method_text(*ch.post), client, settings);
                                return;
                            }
                            auto pre_summary = mms(method_text(*ch.pre), client, settings);
                            s->summary = cmms(pre_summary, changes, client, settings);
                        }});
    }

    struct ClassSlot {
        std::string key;
        const java::UnitRef* ref;
        const java::UnitChange<java::ClassRecord>* change;
        std::optional<std::string> summary;
    };
    std::vector<ClassSlot> class_slots;
    class_slots.reserve(units.classes.size());
    for (const auto& [ref, change] : units.classes) {
        class_slots.push_back({change.current().qualified_name, &ref, &change, std::nullopt});
    }
    for (auto& slot : class_slots) {
        jobs.push_back({"summary of class " + slot.key, [&, s = &slot] {
                            s->summary = summarize_class(class_text(s->change->current()),
                                                         options.class_char_budget, client, settings);
                        }});
    }

    run_jobs(jobs, options.parallelism);

    for (auto& job : jobs) {
        if (job.error && is_fatal(job.error)) std::rethrow_exception(job.error);
    }
    for (auto& job : jobs) {
        if (job.error) ctx.warnings.push_back(job.what + " skipped: " + describe(job.error));
    }

    ctx.activity = activity;
    ctx.diff_explanation = std::move(explanation);

    auto unique_key = [](const auto& map, const std::string& key, const std::string& path) {
        return map.count(key) ? key + " (" + path + ")" : key;
    };
    for (auto& slot : method_slots) {
        if (!slot.summary) continue;
        auto key = unique_key(ctx.method_summaries, slot.key, slot.ref->path);
        ctx.method_summaries.emplace(key, MethodSummaryEntry{slot.change->status, slot.ref->path,
                                                             std::move(*slot.summary)});
    }
    for (auto& slot : class_slots) {
        if (!slot.summary) continue;
        auto key = unique_key(ctx.class_summaries, slot.key, slot.ref->path);
        ctx.class_summaries.emplace(key,
                                    ClassSummaryEntry{slot.change->status, slot.ref->path, std::move(*slot.summary)});
    }
    return ctx;
}

// ---------------------------------------------------------------------------

std::vector<LabeledCommit> load_labeled_dataset(std::string_view jsonl, const std::string& base_dir) {
    std::vector<LabeledCommit> out;
    int lineno = 0;
    for (auto line : text::split_lines(jsonl)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto where = "labeled dataset line " + std::to_string(lineno) + ": ";
        try {
            auto j = json::parse(line);
            LabeledCommit c;
            c.commit_id = json_text(j, "commit_id");
            auto label = activity_from_string(j.at("label").get<std::string>());
            if (!label) throw Error(where + "label must be Corrective, Perfective or Adaptive");
            c.label = *label;
            if (j.contains("diff")) {
                c.diff_text = j.at("diff").get<std::string>();
            } else {
                auto p = std::filesystem::path(base_dir) / j.at("diff_path").get<std::string>();
                c.diff_text = text::read_file(p.string());
            }
            out.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw Error(where + e.what());
        }
    }
    return out;
}

ClassifierValidation validate_classifier(const std::vector<LabeledCommit>& commits, llm::ChatClient& client,
                                         const ModelSettings& settings) {
    ClassifierValidation v;
    for (const auto& c : commits) {
        auto diff = diff::parse_unified_diff(c.diff_text);
        std::string narrative = narrator::render_narrative(diff).text;
        std::string predicted = "unrecognized";
        try {
            auto a = classify_activity(truncate_head_tail(narrative, kClassifierInputBudget), changed_paths(diff),
                                       client, settings);
            predicted = std::string(to_string(a.value));
            if (a.value == c.label) ++v.correct;
        } catch (const UnrecognizedLabel&) {
            ++v.unrecognized;
        }
        ++v.total;
        ++v.confusion[std::string(to_string(c.label))][predicted];
    }
    return v;
}

}  // namespace omega::context
