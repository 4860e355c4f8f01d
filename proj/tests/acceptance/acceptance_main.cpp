// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "omega/cli.hpp"
#include "omega/diff.hpp"
#include "omega/fidex.hpp"
#include "omega/java.hpp"
#include "omega/metrics.hpp"
#include "omega/narrator.hpp"
#include "omega/testing/mock_llm_server.hpp"
#include "omega/text.hpp"
#include "support/java_scan.hpp"
#include "support/paths.hpp"
#include "support/random_diff.hpp"
#include "support/scripted_llm.hpp"

namespace ts = omega::testsupport;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// A check returns an empty string on success, otherwise the reason.
using Check = std::function<std::string()>;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sample(const std::string& name) { return (ts::source_dir() / "data/sample" / name).string(); }

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult omega_cli(const std::vector<std::string>& args) {
    std::istringstream in;
    std::ostringstream out, err;
    int code = omega::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

// ---------------------------------------------------------------------------

std::string diff_round_trip() {
    std::mt19937 rng(5001);
    auto dir = ts::make_temp_dir("acc-roundtrip");
    auto t0 = Clock::now();
    int failures = 0;
    for (int i = 0; i < 500; ++i) {
        auto pair = ts::random_pair(rng);
        auto tool = ts::run_diff_tool(pair, rng, dir, "p" + std::to_string(i));
        try {
            auto d = omega::diff::parse_unified_diff(tool.text);
            std::string post = d.files.empty() ? pair.pre : omega::diff::reconstruct_post(d.files[0], pair.pre);
            if (post != pair.post) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    double s = seconds_since(t0);
    std::filesystem::remove_all(dir);
    if (failures) return std::to_string(failures) + " of 500 pairs did not round-trip";
    if (s >= 5.0) return "took " + std::to_string(s) + " s";
    return "";
}

std::string chunk_partition() {
    std::mt19937 rng(5002);
    auto dir = ts::make_temp_dir("acc-partition");
    std::size_t violations = 0;
    for (int i = 0; i < 500; ++i) {
        std::string combined;
        int files = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int f = 0; f < files; ++f)
            combined += ts::run_diff_tool(ts::random_pair(rng), rng, dir, "f" + std::to_string(f)).text;
        auto d = omega::diff::parse_unified_diff(combined);
        violations += ts::partition_violations(d, omega::narrator::render_narrative(d).items).size();
    }
    // Fixed adjacency cases on top of the random ones.
    auto items = [](const std::string& body, int old_count, int new_count) {
        std::string text = "--- a/f\n+++ b/f\n@@ -1," + std::to_string(old_count) + " +1," +
                           std::to_string(new_count) + " @@\n" + body;
        return omega::narrator::render_narrative(omega::diff::parse_unified_diff(text)).items;
    };
    auto rem_add = items("-a\n+b\n", 1, 1);
    auto add_rem = items("+b\n-a\n", 1, 1);
    std::filesystem::remove_all(dir);
    if (violations) return std::to_string(violations) + " partition violations";
    if (rem_add.size() != 1 || rem_add[0].kind != omega::narrator::ChunkKind::Replacement)
        return "removal then addition did not merge";
    if (add_rem.size() != 2) return "addition then removal merged";
    return "";
}

std::string doc_stripping() {
    auto files = ts::java_corpus();
    if (files.size() < 30) return "corpus has " + std::to_string(files.size()) + " files";
    for (const auto& path : files) {
        std::string src = omega::text::read_file(path.string());
        auto once = omega::java::strip_documentation(src);
        auto before = ts::scan(src), after = ts::scan(once.text);
        if (after.tokens != before.tokens) return path.filename().string() + ": token stream changed";
        if (after.comments != 0) return path.filename().string() + ": comments left";
        if (omega::java::strip_documentation(once.text).text != once.text)
            return path.filename().string() + ": not idempotent";
    }
    for (std::string src : {
             "String s = \"// not a comment\";",
             "String s = \"/* nor this */\";",
             "char c = '/'; char d = '*';",
             "String t = \"\"\"\n    // inside a text block\n    /* too */\n    \"\"\";\n",
             "String e = \"escaped \\\" // still string\";",
         }) {
        if (omega::java::strip_documentation(src).text != src) return "literal altered: " + src;
    }
    return "";
}

std::size_t brute_lcs(const omega::metrics::Tokens& a, const omega::metrics::Tokens& b) {
    std::size_t best = 0;
    for (unsigned mask = 1; mask < (1u << a.size()); ++mask) {
        auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
        if (bits <= best) continue;
        std::size_t j = 0;
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            while (j < b.size() && b[j] != a[i]) ++j;
            if (j == b.size()) ok = false;
            else ++j;
        }
        if (ok) best = bits;
    }
    return best;
}

std::vector<omega::metrics::Tokens> all_sequences(const std::vector<std::string>& alphabet, std::size_t max_len) {
    std::vector<omega::metrics::Tokens> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (const auto& s : alphabet) {
                auto t = out[i];
                t.push_back(s);
                out.push_back(t);
            }
        }
        begin = end;
    }
    return out;
}

std::string metric_oracles() {
    using namespace omega::metrics;
    // Binary alphabet up to length 8, ternary up to length 5: every pair.
    for (auto [alphabet, len] : {std::pair<std::vector<std::string>, std::size_t>{{"a", "b"}, 8},
                                 std::pair<std::vector<std::string>, std::size_t>{{"a", "b", "c"}, 5}}) {
        auto seqs = all_sequences(alphabet, len);
        for (const auto& a : seqs) {
            for (const auto& b : seqs) {
                auto l = brute_lcs(a, b);
                if (lcs_length(a, b) != l) return "lcs mismatch";
                if (a.empty() || b.empty()) continue;
                double p = double(l) / a.size(), r = double(l) / b.size();
                double f = l == 0 ? 0.0 : 100.0 * 2 * p * r / (p + r);
                if (std::abs(rouge_l(a, b) - f) > 1e-9) return "rouge_l mismatch";
            }
        }
    }

    // Worked BLEU examples; values from tests/oracles/metrics_oracle.py.
    std::vector<Tokens> same{tokenize("fix: guard against null user in session lookup"), tokenize("add csv export")};
    if (std::abs(bleu(same, same) - 100.0) > 1e-6) return "bleu identity";
    if (std::abs(bleu({tokenize("the the the")}, {tokenize("the cat sat")}) - 34.66806371753174) > 1e-6)
        return "bleu clipped unigrams";
    std::vector<Tokens> cands, refs;
    for (int p = 0; p < 50; ++p) {
        Tokens c, r;
        for (int k = 0; k < 20; ++k) {
            c.push_back("cand" + std::to_string(p) + "x" + std::to_string(k));
            r.push_back("ref" + std::to_string(p) + "x" + std::to_string(k));
        }
        cands.push_back(c);
        refs.push_back(r);
    }
    double disjoint = bleu(cands, refs);
    if (disjoint >= 1.0 || std::abs(disjoint - 0.054153152535108925) > 1e-6) return "bleu disjoint corpus";

    if (std::abs(meteor({"a", "b", "c"}, {"a", "b", "c"}) - 98.15) > 0.01) return "meteor identity";

    std::mt19937 rng(5004);
    static const Tokens vocab{"fix", "fixes", "fixed", "the", "bug", "in", "parser", "add", "crash", ".", ":"};
    auto random_tokens = [&] {
        Tokens t(std::uniform_int_distribution<std::size_t>(1, 15)(rng));
        for (auto& x : t) x = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
        return t;
    };
    for (int i = 0; i < 5000; ++i) {
        auto c = random_tokens(), r = random_tokens();
        for (double v : {bleu({c}, {r}), meteor(c, r), rouge_l(c, r)})
            if (!(v >= 0.0 && v <= 100.0)) return "score out of range";
    }
    return "";
}

std::string fidex_shape() {
    using omega::llm::Role;
    std::mt19937 rng(5005);
    auto dir = ts::make_temp_dir("acc-fidex");
    std::string fail;
    for (int i = 0; i < 100 && fail.empty(); ++i) {
        auto text = ts::run_diff_tool(ts::random_pair(rng), rng, dir, "f").text;
        auto d = omega::diff::parse_unified_diff(text);
        if (d.files.empty()) continue;
        auto conv = omega::fidex::build_fidex_conversation(d);
        const Role roles[] = {Role::System, Role::User, Role::Assistant, Role::User, Role::Assistant, Role::User};
        if (conv.messages.size() != 6) fail = "message count";
        for (std::size_t k = 0; fail.empty() && k < 6; ++k)
            if (conv.messages[k].role != roles[k]) fail = "role pattern";
        if (!fail.empty()) break;
        if (conv.messages[4].content != omega::narrator::render_narrative(d).text) fail = "assistant#2 is not the narrative";
        const auto& last = conv.messages[5].content;
        if (last.find(std::string(omega::text::trim_right(d.raw_text))) == std::string::npos) fail = "diff not verbatim";
        for (const char* group : {"Fine-grained statement types", "Order of changes", "Style and formatting"})
            if (last.find(group) == std::string::npos) fail = std::string("missing caution group ") + group;
        omega::llm::CallbackClient client(
            [](const omega::llm::Conversation&, const omega::llm::CompletionParams&) { return "explained"; });
        omega::fidex::explain_diff(d, client, {"m", 0.0, 64});
        if (fail.empty() && client.calls() != 1) fail = std::to_string(client.calls()) + " completions";
    }
    // The golden fixture as well.
    auto golden = omega::diff::parse_unified_diff(ts::read_test_file("golden/replacement.diff"));
    if (fail.empty() && omega::fidex::build_fidex_conversation(golden).messages[4].content !=
                            ts::read_test_file("golden/replacement.narrative.txt"))
        fail = "golden narrative";
    std::filesystem::remove_all(dir);
    return fail;
}

const std::vector<std::string> kContextSections = {"## Diff",         "## Issues",           "## Pull Requests",
                                                   "## File Importance", "## Maintenance Activity",
                                                   "## Method Summaries", "## Class Summaries"};

struct Recorded {
    CliResult result;
    std::vector<json> requests;
    std::string generation_prompt;
};

Recorded generate_against_mock(const std::vector<std::string>& extra) {
    omega::testing::MockLlmServer server(ts::scripted_mock_reply);
    auto dir = ts::make_temp_dir("acc-generate");
    ts::write_file(dir / "omega.json", json{{"endpoint_url", server.base_url()}}.dump());
    std::vector<std::string> args{"--config", (dir / "omega.json").string(), "generate", "--fixture",
                                  sample("fixture.json")};
    args.insert(args.end(), extra.begin(), extra.end());
    Recorded r{omega_cli(args), server.requests(), ""};
    for (const auto& req : r.requests) {
        const auto& msgs = req.at("messages");
        if (msgs.front().at("content").get<std::string>().starts_with("You are an experienced software developer"))
            r.generation_prompt = msgs.back().at("content").get<std::string>();
    }
    std::filesystem::remove_all(dir);
    return r;
}

std::string wire_contract() {
    auto r = generate_against_mock({});
    if (r.result.code != 0) return "generate exited " + std::to_string(r.result.code) + ": " + r.result.err;
    if (r.requests.empty()) return "no requests";
    for (const auto& req : r.requests) {
        if (!req.contains("temperature") || !req["temperature"].is_number_integer() || req["temperature"] != 0)
            return "temperature is not 0";
        for (const char* k : {"presence_penalty", "frequency_penalty"})
            if (req.contains(k)) return std::string("request carries ") + k;
    }
    if (r.generation_prompt.empty()) return "no generation request";
    std::size_t last = 0;
    for (const auto& h : kContextSections) {
        auto at = r.generation_prompt.find(h + "\n");
        if (at == std::string::npos || (at != 0 && r.generation_prompt[at - 1] != '\n')) return "missing " + h;
        if (at < last) return h + " out of order";
        last = at;
    }
    static const std::regex header(R"(^(fix|feat|refactor|style): .+)");
    auto first = r.result.out.substr(0, r.result.out.find('\n'));
    if (!std::regex_search(first, header)) return "header '" + first + "'";
    return "";
}

std::string determinism() {
    std::string expected = omega::text::read_file(sample("expected_message.txt"));
    for (int i = 0; i < 10; ++i) {
        auto r = omega_cli({"generate", "--fixture", sample("fixture.json"), "--replay", sample("capture.jsonl")});
        if (r.code != 0) return "run " + std::to_string(i) + " exited " + std::to_string(r.code) + ": " + r.err;
        if (r.out != expected) return "run " + std::to_string(i) + " differs from expected_message.txt";
    }
    return "";
}

// "## " sections of a prompt, keyed by heading.
std::map<std::string, std::string> sections(const std::string& prompt) {
    std::map<std::string, std::string> out;
    std::string current;
    for (auto line : omega::text::split_lines(prompt)) {
        if (line.starts_with("## ")) {
            current = std::string(line);
            out[current];
        } else if (!current.empty()) {
            out[current] += std::string(line) + "\n";
        }
    }
    return out;
}

// "### " entries of the method summaries section, keyed by heading line.
std::map<std::string, std::string> entries(const std::string& section) {
    std::map<std::string, std::string> out;
    std::string current;
    for (auto line : omega::text::split_lines(section)) {
        if (line.starts_with("### ")) {
            current = std::string(line);
            out[current];
        } else if (!current.empty()) {
            out[current] += std::string(line) + "\n";
        }
    }
    return out;
}

std::string ablation_independence() {
    auto full = generate_against_mock({"--json"});
    auto no_fidex = generate_against_mock({"--json", "--no-fidex"});
    auto no_cmms = generate_against_mock({"--json", "--no-cmms"});
    for (const auto* r : {&full, &no_fidex, &no_cmms})
        if (r->result.code != 0 || r->generation_prompt.empty()) return "generate failed: " + r->result.err;

    const std::string explanation = "## Diff Explanation";
    const std::string methods = "## Method Summaries";
    auto a = sections(full.generation_prompt);
    auto b = sections(no_fidex.generation_prompt);
    if (!a.count(explanation)) return "full run has no explanation section";
    if (b.count(explanation)) return "--no-fidex kept the explanation section";
    for (const auto& [h, body] : a)
        if (h != explanation && (!b.count(h) || b[h] != body)) return "--no-fidex changed " + h;
    if (b.size() + 1 != a.size()) return "--no-fidex added a section";

    auto c = sections(no_cmms.generation_prompt);
    if (c.size() != a.size()) return "--no-cmms changed the section list";
    for (const auto& [h, body] : a)
        if (h != methods && (!c.count(h) || c[h] != body)) return "--no-cmms changed " + h;
    auto ea = entries(a[methods]), ec = entries(c[methods]);
    if (ea.size() != ec.size()) return "--no-cmms changed the method entries";
    bool any_modified_changed = false;
    for (const auto& [h, body] : ea) {
        if (!ec.count(h)) return "--no-cmms renamed " + h;
        bool modified = h.find("[modified, ") != std::string::npos;
        if (!modified && ec[h] != body) return "--no-cmms changed unmodified entry " + h;
        if (modified && ec[h] != body) any_modified_changed = true;
    }
    if (!any_modified_changed) return "--no-cmms changed nothing";
    return "";
}

std::string evaluate_harness() {
    auto t0 = Clock::now();
    auto rep = omega::metrics::evaluate_corpus(
        omega::metrics::load_eval_dataset(ts::read_test_file("data/eval10.jsonl")));
    auto table = omega::metrics::render_table(rep);
    double s = seconds_since(t0);
    if (!rep.reference_omg || !rep.reference_human) return "missing column";
    const std::pair<double, double> expected[] = {
        {rep.reference_omg->bleu, 13.505347822755988},     {rep.reference_omg->meteor, 40.927438704636536},
        {rep.reference_omg->rouge_l, 43.22056890841957},   {rep.reference_human->bleu, 2.807620818288136},
        {rep.reference_human->meteor, 41.16207748702667},  {rep.reference_human->rouge_l, 30.17644664703488},
    };
    for (auto [got, want] : expected)
        if (std::abs(got - want) > 1e-6) return "score " + std::to_string(got) + " != " + std::to_string(want);
    for (const char* col : {"Reference OMG", "Reference Human", "BLEU", "METEOR", "ROUGE-L"})
        if (table.find(col) == std::string::npos) return std::string("table lacks ") + col;
    if (s >= 1.0) return "took " + std::to_string(s) + " s";
    return "";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Check>> criteria = {
        {"diff round-trip over 500 random pairs", diff_round_trip},
        {"chunk partition and kind soundness over 500 random diffs", chunk_partition},
        {"documentation stripping over the Java corpus", doc_stripping},
        {"metric oracles", metric_oracles},
        {"FIDEX conversation shape", fidex_shape},
        {"wire contract of a full generate run", wire_contract},
        {"replay determinism over 10 runs", determinism},
        {"ablation independence", ablation_independence},
        {"evaluate harness on the bundled fixture", evaluate_harness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string why;
        auto t0 = Clock::now();
        try {
            why = criteria[i].second();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
        std::cout << (why.empty() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << " (" << timing
                  << ")";
        if (!why.empty()) {
            std::cout << ": " << why;
            ++failed;
        }
        std::cout << std::endl;
    }
    return failed ? 1 : 0;
}
