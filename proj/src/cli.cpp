#include "omega/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "omega/config.hpp"
#include "omega/context.hpp"
#include "omega/diff.hpp"
#include "omega/error.hpp"
#include "omega/fidex.hpp"
#include "omega/generator.hpp"
#include "omega/java.hpp"
#include "omega/metrics.hpp"
#include "omega/narrator.hpp"
#include "omega/text.hpp"

namespace omega::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string dump(const json& j) {
    return j.dump(2, ' ', false, json::error_handler_t::replace);
}

std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return text::read_file(path);
}

json to_json(const context::AspectTexts& t) {
    json j = json::object();
    for (auto a : context::kAspects) j[std::string(context::label(a))] = t[a];
    return j;
}

json to_json(const context::MethodSummary& s) {
    if (const auto* m = std::get_if<context::MultiIntentSummary>(&s)) return {{"kind", "mms"}, {"aspects", to_json(*m)}};
    if (const auto* c = std::get_if<context::ChangeImpactSummary>(&s))
        return {{"kind", "cmms"}, {"impacts", to_json(*c)}};
    const auto& ba = std::get<context::BeforeAfterSummary>(s);
    return {{"kind", "mms_before_after"}, {"before", to_json(ba.before)}, {"after", to_json(ba.after)}};
}

json to_json(const context::CommitContext& ctx) {
    json j;
    j["sha"] = ctx.sha;
    j["files"] = json::array();
    for (const auto& f : ctx.diff.files) {
        j["files"].push_back({{"path", f.path()}, {"status", diff::to_string(f.status)}});
    }
    j["diff_explanation"] = ctx.diff_explanation ? json(*ctx.diff_explanation) : json(nullptr);
    j["issues"] = json::array();
    for (const auto& i : ctx.issues) {
        j["issues"].push_back({{"id", i.id}, {"title", i.title}, {"body", i.body}, {"state", i.state}});
    }
    j["pull_requests"] = json::array();
    for (const auto& p : ctx.pull_requests) {
        j["pull_requests"].push_back({{"id", p.id}, {"title", p.title}, {"body", p.body}, {"branch", p.branch}});
    }
    j["file_importance"] = json::array();
    for (const auto& f : ctx.file_importance) j["file_importance"].push_back({{"path", f.path}, {"score", f.score}});
    if (ctx.activity) {
        j["activity"] = {{"value", context::to_string(ctx.activity->value)},
                         {"header_tag", context::to_string(ctx.activity->header_tag)}};
    } else {
        j["activity"] = nullptr;
    }
    j["method_summaries"] = json::object();
    for (const auto& [name, e] : ctx.method_summaries) {
        j["method_summaries"][name] = {
            {"status", java::to_string(e.status)}, {"path", e.path}, {"summary", to_json(e.summary)}};
    }
    j["class_summaries"] = json::object();
    for (const auto& [name, e] : ctx.class_summaries) {
        j["class_summaries"][name] = {{"status", java::to_string(e.status)}, {"path", e.path}, {"summary", e.summary}};
    }
    j["warnings"] = ctx.warnings;
    return j;
}

json to_json(const narrator::ChangeItem& item) {
    auto lines = [](const std::vector<narrator::NumberedLine>& ls) {
        json a = json::array();
        for (const auto& l : ls) a.push_back({{"line", l.lineno}, {"content", l.content}});
        return a;
    };
    return {{"index", item.index},
            {"kind", narrator::to_string(item.kind)},
            {"file", item.file},
            {"removed", lines(item.removed_lines)},
            {"added", lines(item.added_lines)}};
}

struct CaptureFlags {
    std::string record;
    std::string replay;

    void add_to(CLI::App* cmd) {
        auto* r = cmd->add_option("--record", record, "Record LLM traffic to this capture file");
        auto* p = cmd->add_option("--replay", replay, "Answer LLM requests from this capture file");
        r->excludes(p);
    }

    void apply(config::Config& cfg) const {
        if (!record.empty()) {
            cfg.capture_mode = llm::CaptureMode::Record;
            cfg.capture_path = record;
        }
        if (!replay.empty()) {
            cfg.capture_mode = llm::CaptureMode::Replay;
            cfg.capture_path = replay;
        }
    }
};

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "omega: warning: " << w << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Commit message generation from commit context with an OpenAI-compatible LLM.", "omega"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Config file (default ./omega.json when present)");

    std::function<void()> action;

    // narrate
    std::string narrate_file;
    bool narrate_json = false;
    auto* narrate = app.add_subcommand("narrate", "Print the numbered Diff Narrative of a unified diff");
    narrate->add_option("diff", narrate_file, "Diff file, or - for standard input")->required();
    narrate->add_flag("--json", narrate_json, "Print change items as JSON");
    narrate->callback([&] {
        action = [&] {
            auto d = diff::parse_unified_diff(read_input(narrate_file, in));
            auto n = narrator::render_narrative(d);
            if (narrate_json) {
                json items = json::array();
                for (const auto& item : n.items) items.push_back(to_json(item));
                out << dump({{"items", items}, {"text", n.text}}) << '\n';
            } else {
                out << n.text;
            }
        };
    });

    // explain
    std::string explain_file;
    bool dry_run = false;
    bool per_file = false;
    CaptureFlags explain_capture;
    auto* explain = app.add_subcommand("explain", "Explain a diff file by file with the FIDEX conversation");
    explain->add_option("diff", explain_file, "Diff file, or - for standard input")->required();
    explain->add_flag("--dry-run", dry_run, "Print the six-message conversation without calling the endpoint");
    explain->add_flag("--per-file", per_file, "One conversation per changed file");
    explain_capture.add_to(explain);
    explain->callback([&] {
        action = [&] {
            auto d = diff::parse_unified_diff(read_input(explain_file, in));
            if (dry_run) {
                out << dump(llm::to_json(fidex::build_fidex_conversation(d))) << '\n';
                return;
            }
            auto cfg = config::load(config_path);
            explain_capture.apply(cfg);
            auto client = config::make_client(cfg);
            auto mode = per_file || cfg.fidex_per_file ? fidex::Mode::PerFile : fidex::Mode::SingleCall;
            auto settings = cfg.model_settings();
            out << text::trim_right(
                       fidex::explain_diff(d, *client, settings.params(settings.max_tokens.explanation), mode).text)
                << '\n';
        };
    });

    // generate
    std::string repo = ".";
    std::string commit;
    std::string fixture;
    bool no_fidex = false;
    bool no_cmms = false;
    bool keep_docs = false;
    bool gen_json = false;
    CaptureFlags gen_capture;
    auto* gen = app.add_subcommand("generate", "Generate a commit message for one commit");
    gen->add_option("--repo", repo, "Repository path")->capture_default_str();
    gen->add_option("--commit", commit, "Commit to describe");
    gen->add_option("--fixture", fixture, "Commit fixture document (replaces --repo/--commit)");
    gen->add_flag("--no-fidex", no_fidex, "Leave out the FIDEX diff explanation");
    gen->add_flag("--no-cmms", no_cmms, "Summarize modified methods with plain MMS");
    gen->add_flag("--keep-docs", keep_docs, "Keep comments and Javadoc in summarized code");
    gen->add_flag("--json", gen_json, "Print the message with its context and transcript as JSON");
    gen_capture.add_to(gen);
    gen->callback([&] {
        action = [&] {
            if (fixture.empty() && commit.empty()) throw UsageError("generate needs --commit or --fixture");
            auto cfg = config::load(config_path);
            gen_capture.apply(cfg);
            auto client = config::make_client(cfg);

            context::CommitInput input;
            if (!fixture.empty()) {
                input = context::load_fixture(fixture);
            } else {
                context::IssueSource source;
                if (cfg.github) {
                    const char* token = std::getenv(cfg.github->token_env.c_str());
                    source = context::GitHubSource{cfg.github->api_base, cfg.github->slug, token ? token : ""};
                }
                input = context::load_from_repo(repo, commit, std::move(source));
            }

            context::AssembleOptions options;
            options.use_fidex = !no_fidex;
            options.use_cmms = !no_cmms;
            options.strip_docs = !keep_docs;
            options.parallelism = cfg.parallelism;
            options.class_char_budget = cfg.class_char_budget;
            options.fidex_mode = cfg.fidex_per_file ? fidex::Mode::PerFile : fidex::Mode::SingleCall;
            auto settings = cfg.model_settings();

            auto ctx = context::assemble_context(input, options, *client, settings);
            print_warnings(ctx.warnings, err);
            auto result =
                generator::generate(ctx, *client, settings.params(settings.max_tokens.message), cfg.prompt_budget);
            for (const auto& s : result.truncated_sections) {
                err << "omega: warning: section '" << s << "' truncated to fit the prompt budget\n";
            }
            if (result.overridden_tag) {
                err << "omega: note: model chose '" << context::to_string(*result.overridden_tag)
                    << "', header uses the classified '" << context::to_string(result.message.tag) << "'\n";
            }
            if (gen_json) {
                json j;
                j["message"] = result.message.render();
                j["tag"] = context::to_string(result.message.tag);
                j["subject"] = result.message.subject;
                j["body"] = result.message.body;
                j["completions"] = result.completions;
                j["truncated_sections"] = result.truncated_sections;
                j["context"] = to_json(ctx);
                j["transcript"] = llm::to_json(result.transcript);
                out << dump(j) << '\n';
            } else {
                out << result.message.render() << '\n';
            }
        };
    });

    // evaluate
    std::string dataset;
    bool eval_json = false;
    bool eval_table = false;
    auto* evaluate = app.add_subcommand("evaluate", "Score candidates against OMG and human references");
    evaluate->add_option("dataset", dataset, "JSON lines {commit_id, candidate, reference_omg?, reference_human?}")
        ->required();
    auto* ej = evaluate->add_flag("--json", eval_json, "JSON report");
    auto* et = evaluate->add_flag("--table", eval_table, "Table report (default)");
    ej->excludes(et);
    evaluate->callback([&] {
        action = [&] {
            auto report = metrics::evaluate_corpus(metrics::load_eval_dataset(read_input(dataset, in)));
            out << (eval_json ? metrics::render_json(report) : metrics::render_table(report));
        };
    });

    // strip-docs
    std::string strip_file;
    auto* strip = app.add_subcommand("strip-docs", "Remove comments and Javadoc from a Java file");
    strip->add_option("file", strip_file, "Java file, or - for standard input")->required();
    strip->callback([&] {
        action = [&] {
            auto r = java::strip_documentation(read_input(strip_file, in));
            print_warnings(r.warnings, err);
            out << r.text;
        };
    });

    // units
    std::string units_file;
    bool units_json = false;
    auto* units = app.add_subcommand("units", "List the classes and methods of a Java file");
    units->add_option("file", units_file, "Java file, or - for standard input")->required();
    units->add_flag("--json", units_json, "Print JSON");
    units->callback([&] {
        action = [&] {
            auto u = java::extract_units(read_input(units_file, in));
            print_warnings(u.diagnostics, err);
            if (units_json) {
                json j = {{"classes", json::array()}, {"methods", json::array()}};
                for (const auto& c : u.classes) {
                    j["classes"].push_back(
                        {{"name", c.qualified_name}, {"start_line", c.span.start_line}, {"end_line", c.span.end_line}});
                }
                for (const auto& m : u.methods) {
                    j["methods"].push_back({{"name", m.qualified_name},
                                            {"signature", m.signature},
                                            {"start_line", m.span.start_line},
                                            {"end_line", m.span.end_line}});
                }
                out << dump(j) << '\n';
                return;
            }
            for (const auto& c : u.classes) {
                out << "class " << c.qualified_name << " " << c.span.start_line << "-" << c.span.end_line << '\n';
            }
            for (const auto& m : u.methods) {
                out << "method " << m.qualified_name << " " << m.span.start_line << "-" << m.span.end_line << '\n';
            }
        };
    });

    // validate-classifier
    std::string labeled;
    bool vc_json = false;
    CaptureFlags vc_capture;
    auto* vc = app.add_subcommand("validate-classifier", "Accuracy of the activity classifier on labeled commits");
    vc->add_option("dataset", labeled, "JSON lines {commit_id, label, diff | diff_path}")->required();
    vc->add_flag("--json", vc_json, "Print JSON");
    vc_capture.add_to(vc);
    vc->callback([&] {
        action = [&] {
            auto base = std::filesystem::path(labeled).parent_path().string();
            auto commits = context::load_labeled_dataset(read_input(labeled, in), base);
            auto cfg = config::load(config_path);
            vc_capture.apply(cfg);
            auto client = config::make_client(cfg);
            auto v = context::validate_classifier(commits, *client, cfg.model_settings());
            if (vc_json) {
                out << dump({{"total", v.total},
                             {"correct", v.correct},
                             {"unrecognized", v.unrecognized},
                             {"accuracy", v.accuracy()},
                             {"confusion", v.confusion}})
                    << '\n';
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v.accuracy());
            out << "commits: " << v.total << "\ncorrect: " << v.correct << "\nunrecognized: " << v.unrecognized
                << "\naccuracy: " << buf << "%\n";
            for (const auto& [label, row] : v.confusion) {
                for (const auto& [predicted, n] : row) out << label << " -> " << predicted << ": " << n << '\n';
            }
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // Prints help for --help, or the error plus a usage hint.
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "omega: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "omega: error: " << e.what() << '\n';
        return kExitPipelineError;
    }
}

}  // namespace omega::cli
