#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "omega/error.hpp"
#include "omega/metrics.hpp"
#include "support/paths.hpp"

namespace omega::metrics {
namespace {

// Values below come from tests/oracles/metrics_oracle.py.
constexpr double kTol = 1e-9;

Tokens toks(std::string_view s) { return tokenize(s); }

TEST(Tokenize, Examples) {
    EXPECT_EQ(tokenize("Fix NPE."), (Tokens{"fix", "npe", "."}));
    EXPECT_EQ(tokenize(""), Tokens{});
    EXPECT_EQ(tokenize("a,b"), (Tokens{"a", ",", "b"}));
    EXPECT_EQ(tokenize("  fix:\tParser crash\n"), (Tokens{"fix", ":", "parser", "crash"}));
    EXPECT_EQ(tokenize("Grüße ÄND"), (Tokens{"grüße", "Änd"}));
    EXPECT_EQ(tokenize("feat(cli)!"), (Tokens{"feat", "(", "cli", ")", "!"}));
}

TEST(Bleu, Identity) {
    std::vector<Tokens> c{toks("fix: guard against null user in session lookup"), toks("add csv export")};
    EXPECT_NEAR(bleu(c, c), 100.0, kTol);
}

TEST(Bleu, ClippedUnigrams) {
    EXPECT_NEAR(bleu({toks("the the the")}, {toks("the cat sat")}), 34.66806371753174, kTol);
}

TEST(Bleu, DisjointCorpusNearZero) {
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
    double b = bleu(cands, refs);
    EXPECT_LT(b, 1.0);
    EXPECT_NEAR(b, 0.054153152535108925, kTol);
}

TEST(Bleu, DisjointShortPairIsNotZero) {
    // The smoothing floor dominates when the corpus is tiny.
    EXPECT_NEAR(bleu({toks("a b c")}, {toks("d e f")}), 27.51606040745522, kTol);
}

TEST(Bleu, Errors) {
    EXPECT_THROW(bleu({}, {}), EmptyCorpus);
    EXPECT_THROW(bleu({toks("a")}, {}), std::exception);
}

TEST(RougeL, Examples) {
    EXPECT_NEAR(rouge_l({"a", "b", "c", "d"}, {"a", "c", "d"}), 85.71428571428571, kTol);
    EXPECT_NEAR(rouge_l(toks("same text here"), toks("same text here")), 100.0, kTol);
    EXPECT_EQ(rouge_l({"x"}, {"y"}), 0.0);
    EXPECT_THROW(rouge_l({}, {"y"}), EmptyText);
    EXPECT_THROW(rouge_l({"x"}, {}), EmptyText);
}

TEST(Meteor, Examples) {
    EXPECT_NEAR(meteor({"a", "b", "c"}, {"a", "b", "c"}), 98.14814814814815, kTol);
    EXPECT_NEAR(meteor({"fixes"}, {"fixed"}), 50.0, kTol);
    EXPECT_EQ(meteor({"x", "y"}, {"z"}), 0.0);
    EXPECT_NEAR(meteor(toks("the fix the bug the"), toks("the bug fix in the parser")), 53.4957627118644, kTol);
    EXPECT_NEAR(meteor(toks("Fixes crashing parsers when reading files"), toks("fixed a crash in the parser reading file")),
                47.69230769230769, kTol);
    EXPECT_THROW(meteor({}, {"y"}), EmptyText);
}

TEST(Meteor, DetailForStemMatch) {
    auto d = meteor_detail({"fixes"}, {"fixed"});
    EXPECT_EQ(d.matches, 1u);
    EXPECT_EQ(d.exact_matches, 0u);
    EXPECT_EQ(d.chunks, 1u);
    EXPECT_NEAR(d.penalty, 0.5, kTol);
}

TEST(MetricsOracle, RandomPairsMatchReference) {
    std::istringstream in(testsupport::read_test_file("data/metric_fuzz.jsonl"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        auto c = j["candidate"].get<Tokens>();
        auto r = j["reference"].get<Tokens>();
        SCOPED_TRACE(line);
        EXPECT_NEAR(bleu({c}, {r}), j["bleu"].get<double>(), 1e-9);
        EXPECT_NEAR(meteor(c, r), j["meteor"].get<double>(), 1e-9);
        EXPECT_NEAR(rouge_l(c, r), j["rouge_l"].get<double>(), 1e-9);
        ++rows;
    }
    EXPECT_EQ(rows, 300);
}

std::size_t lcs_brute(const Tokens& a, const Tokens& b) {
    std::size_t best = 0;
    for (unsigned mask = 0; mask < (1u << a.size()); ++mask) {
        std::size_t j = 0, len = 0;
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            while (j < b.size() && b[j] != a[i]) ++j;
            if (j == b.size()) ok = false;
            else { ++j; ++len; }
        }
        if (ok) best = std::max(best, len);
    }
    return best;
}

TEST(RougeLProperty, LcsMatchesBruteForce) {
    // Every pair of lists up to length 4 over {a,b,c}, then random lists up to 8.
    std::vector<Tokens> all{{}};
    for (std::size_t len = 1; len <= 4; ++len) {
        std::vector<Tokens> next;
        for (const auto& t : all)
            if (t.size() == len - 1)
                for (const char* s : {"a", "b", "c"}) {
                    auto u = t;
                    u.push_back(s);
                    next.push_back(u);
                }
        all.insert(all.end(), next.begin(), next.end());
    }
    ASSERT_EQ(all.size(), 121u);
    for (const auto& a : all)
        for (const auto& b : all) ASSERT_EQ(lcs_length(a, b), lcs_brute(a, b));

    std::mt19937 rng(99);
    for (int iter = 0; iter < 3000; ++iter) {
        auto gen = [&] {
            Tokens t(std::uniform_int_distribution<std::size_t>(0, 8)(rng));
            for (auto& x : t) x = std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 3)(rng)));
            return t;
        };
        auto a = gen(), b = gen();
        ASSERT_EQ(lcs_length(a, b), lcs_brute(a, b));
        if (!a.empty() && !b.empty()) {
            std::size_t l = lcs_brute(a, b);
            double expect = l == 0 ? 0.0
                                   : 100.0 * 2.0 * (double(l) / a.size()) * (double(l) / b.size()) /
                                         (double(l) / a.size() + double(l) / b.size());
            ASSERT_NEAR(rouge_l(a, b), expect, 1e-9);
        }
    }
}

Tokens random_tokens(std::mt19937& rng, std::size_t max_len) {
    static const Tokens vocab{"fix", "fixes", "the", "bug", "in", "parser", "add", "test", "crash", ".", ":"};
    Tokens t(std::uniform_int_distribution<std::size_t>(1, max_len)(rng));
    for (auto& x : t) x = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
    return t;
}

TEST(MetricsProperty, ScoresWithinBounds) {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        auto c = random_tokens(rng, 15), r = random_tokens(rng, 15);
        for (double v : {bleu({c}, {r}), meteor(c, r), rouge_l(c, r)}) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 100.0 + 1e-9);
        }
        ASSERT_NEAR(rouge_l(c, c), 100.0, 1e-9);
        ASSERT_NEAR(bleu({c}, {c}), 100.0, 1e-9);
    }
}

TEST(MetricsProperty, BleuPermutationInvariant) {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<Tokens> c, r;
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        for (std::size_t k = 0; k < n; ++k) {
            c.push_back(random_tokens(rng, 10));
            r.push_back(random_tokens(rng, 10));
        }
        double base = bleu(c, r);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Tokens> c2, r2;
        for (auto k : order) {
            c2.push_back(c[k]);
            r2.push_back(r[k]);
        }
        ASSERT_NEAR(bleu(c2, r2), base, 1e-9);
    }
}

TEST(MetricsProperty, MatchingTokenNeverLowersRougeRecall) {
    std::mt19937 rng(13);
    for (int iter = 0; iter < 2000; ++iter) {
        auto c = random_tokens(rng, 10), r = random_tokens(rng, 10);
        double recall = double(lcs_length(c, r)) / r.size();
        auto c2 = c;
        auto pos = std::uniform_int_distribution<std::size_t>(0, c.size())(rng);
        c2.insert(c2.begin() + static_cast<std::ptrdiff_t>(pos), r[std::uniform_int_distribution<std::size_t>(0, r.size() - 1)(rng)]);
        ASSERT_GE(double(lcs_length(c2, r)) / r.size(), recall);
    }
}

TEST(EvaluateCorpus, BundledTenPairs) {
    auto pairs = load_eval_dataset(testsupport::read_test_file("data/eval10.jsonl"));
    ASSERT_EQ(pairs.size(), 10u);
    auto rep = evaluate_corpus(pairs);
    EXPECT_EQ(rep.total_pairs, 10u);
    EXPECT_EQ(rep.skipped_omg, 1u);
    EXPECT_EQ(rep.skipped_human, 1u);
    ASSERT_TRUE(rep.reference_omg);
    ASSERT_TRUE(rep.reference_human);
    EXPECT_EQ(rep.reference_omg->pairs, 9u);
    EXPECT_NEAR(rep.reference_omg->bleu, 13.505347822755988, 1e-6);
    EXPECT_NEAR(rep.reference_omg->meteor, 40.927438704636536, 1e-6);
    EXPECT_NEAR(rep.reference_omg->rouge_l, 43.22056890841957, 1e-6);
    EXPECT_EQ(rep.reference_human->pairs, 9u);
    EXPECT_NEAR(rep.reference_human->bleu, 2.807620818288136, 1e-6);
    EXPECT_NEAR(rep.reference_human->meteor, 41.16207748702667, 1e-6);
    EXPECT_NEAR(rep.reference_human->rouge_l, 30.17644664703488, 1e-6);
}

TEST(EvaluateCorpus, SingleIdenticalPairAndAbsentColumn) {
    auto rep = evaluate_corpus({{"x", "fix parser crash", std::string("fix parser crash"), std::nullopt}});
    ASSERT_TRUE(rep.reference_omg);
    EXPECT_NEAR(rep.reference_omg->bleu, 100.0, kTol);
    EXPECT_NEAR(rep.reference_omg->rouge_l, 100.0, kTol);
    EXPECT_NEAR(rep.reference_omg->meteor, 100.0 * (1 - 0.5 / 27.0), kTol);
    EXPECT_FALSE(rep.reference_human);
    EXPECT_NE(render_table(rep).find("Reference Human column absent"), std::string::npos);
    auto j = nlohmann::json::parse(render_json(rep));
    EXPECT_TRUE(j["reference_human"].is_null());
    EXPECT_EQ(j["metadata"].size(), 4u);
}

TEST(EvaluateCorpus, TableShape) {
    auto rep = evaluate_corpus(load_eval_dataset(testsupport::read_test_file("data/eval10.jsonl")));
    auto table = render_table(rep);
    EXPECT_NE(table.find("Reference OMG"), std::string::npos);
    EXPECT_NE(table.find("13.51"), std::string::npos);
    EXPECT_NE(table.find("# METEOR: exact + Porter stem stages, no synonyms"), std::string::npos);
}

TEST(LoadEvalDataset, Rejections) {
    EXPECT_THROW(load_eval_dataset("{not json}\n"), Error);
    EXPECT_THROW(load_eval_dataset("{\"commit_id\":\"a\",\"candidate\":\"x\"}\n"), Error);
    EXPECT_EQ(load_eval_dataset("\n{\"commit_id\":\"a\",\"candidate\":\"x\",\"reference_human\":\"y\"}\n\n").size(), 1u);
}

}  // namespace
}  // namespace omega::metrics
