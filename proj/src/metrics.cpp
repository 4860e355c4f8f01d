#include "omega/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "omega/error.hpp"
#include "omega/stemmer.hpp"
#include "omega/text.hpp"

namespace omega::metrics {

namespace {

// Length of a Unicode whitespace sequence starting at s[i], or 0.
std::size_t unicode_space_at(std::string_view s, std::size_t i) {
    auto u = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char c = u(i);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return 1;
    if (c == 0xC2 && i + 1 < s.size() && (u(i + 1) == 0x85 || u(i + 1) == 0xA0)) return 2;
    if (c == 0xE1 && i + 2 < s.size() && u(i + 1) == 0x9A && u(i + 2) == 0x80) return 3;  // U+1680
    if (c == 0xE2 && i + 2 < s.size()) {
        unsigned char b1 = u(i + 1), b2 = u(i + 2);
        if (b1 == 0x80 && ((b2 >= 0x80 && b2 <= 0x8A) || b2 == 0xA8 || b2 == 0xA9 || b2 == 0xAF)) return 3;
        if (b1 == 0x81 && b2 == 0x9F) return 3;  // U+205F
    }
    if (c == 0xE3 && i + 2 < s.size() && u(i + 1) == 0x80 && u(i + 2) == 0x80) return 3;  // U+3000
    return 0;
}

}  // namespace

Tokens tokenize(std::string_view text) {
    Tokens out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) out.push_back(std::move(current));
        current.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::size_t n = unicode_space_at(text, i)) {
            flush();
            i += n;
            continue;
        }
        auto c = static_cast<unsigned char>(text[i]);
        if (c < 0x80 && std::ispunct(c)) {
            flush();
            out.emplace_back(1, static_cast<char>(c));
        } else {
            current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        }
        ++i;
    }
    flush();
    return out;
}

namespace {

std::map<std::vector<std::string_view>, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n) {
    std::map<std::vector<std::string_view>, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        ++counts[gram];
    }
    return counts;
}

}  // namespace

double bleu(const std::vector<Tokens>& candidates, const std::vector<Tokens>& references) {
    if (candidates.empty()) throw EmptyCorpus();
    if (candidates.size() != references.size())
        throw std::invalid_argument("bleu: candidate and reference lists differ in length");
    constexpr std::size_t kMaxOrder = 4;
    std::array<std::size_t, kMaxOrder> matched{}, total{};
    std::size_t cand_len = 0, ref_len = 0;
    for (std::size_t p = 0; p < candidates.size(); ++p) {
        cand_len += candidates[p].size();
        ref_len += references[p].size();
        for (std::size_t n = 1; n <= kMaxOrder; ++n) {
            auto cand = ngram_counts(candidates[p], n);
            auto ref = ngram_counts(references[p], n);
            for (const auto& [gram, count] : cand) {
                total[n - 1] += count;
                auto it = ref.find(gram);
                if (it != ref.end()) matched[n - 1] += std::min(count, it->second);
            }
        }
    }
    if (cand_len == 0) return 0.0;
    double log_sum = 0;
    int orders = 0;
    for (std::size_t n = 0; n < kMaxOrder; ++n) {
        if (total[n] == 0) continue;
        double p = matched[n] > 0 ? static_cast<double>(matched[n]) / static_cast<double>(total[n])
                                  : 1.0 / (2.0 * static_cast<double>(total[n]));
        log_sum += std::log(p);
        ++orders;
    }
    double geo = std::exp(log_sum / orders);
    double bp = cand_len < ref_len ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len)) : 1.0;
    return std::clamp(100.0 * bp * geo, 0.0, 100.0);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const Tokens& reference) {
    if (candidate.empty() || reference.empty()) throw EmptyText("rouge_l: empty candidate or reference");
    auto lcs = static_cast<double>(lcs_length(candidate, reference));
    if (lcs == 0) return 0.0;
    double p = lcs / static_cast<double>(candidate.size());
    double r = lcs / static_cast<double>(reference.size());
    return 100.0 * 2 * p * r / (p + r);
}

MeteorDetail meteor_detail(const Tokens& candidate, const Tokens& reference) {
    if (candidate.empty() || reference.empty()) throw EmptyText("meteor: empty candidate or reference");
    MeteorDetail d;
    std::vector<std::optional<std::size_t>> align(candidate.size());
    std::vector<bool> ref_used(reference.size(), false);

    // Each stage walks the candidate from the back; a token takes the latest
    // free reference token of the same form. This is the tie rule of the
    // NLTK implementation, so scores agree with it on repeated words.
    auto stage = [&](const std::vector<std::string>& cand, const std::vector<std::string>& ref, bool exact) {
        for (std::size_t i = cand.size(); i-- > 0;) {
            if (align[i]) continue;
            for (std::size_t j = ref.size(); j-- > 0;) {
                if (!ref_used[j] && cand[i] == ref[j]) {
                    align[i] = j;
                    ref_used[j] = true;
                    if (exact) ++d.exact_matches;
                    break;
                }
            }
        }
    };
    stage(candidate, reference, true);

    // Stage 2: Porter stems among the tokens left over.
    std::vector<std::string> cand_stems(candidate.size()), ref_stems(reference.size());
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (!align[i]) cand_stems[i] = porter_stem(candidate[i]);
    }
    for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j]) ref_stems[j] = porter_stem(reference[j]);
    }
    stage(cand_stems, ref_stems, false);

    std::optional<std::size_t> prev_ref;
    bool prev_matched = false;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        if (!align[i]) {
            prev_matched = false;
            continue;
        }
        ++d.matches;
        if (!prev_matched || *align[i] != *prev_ref + 1) ++d.chunks;
        prev_ref = align[i];
        prev_matched = true;
    }
    if (d.matches == 0) return d;
    auto m = static_cast<double>(d.matches);
    d.precision = m / static_cast<double>(candidate.size());
    d.recall = m / static_cast<double>(reference.size());
    d.fmean = 10 * d.precision * d.recall / (d.recall + 9 * d.precision);
    d.penalty = 0.5 * std::pow(static_cast<double>(d.chunks) / m, 3);
    d.score = std::clamp(100.0 * d.fmean * (1 - d.penalty), 0.0, 100.0);
    return d;
}

double meteor(const Tokens& candidate, const Tokens& reference) { return meteor_detail(candidate, reference).score; }

namespace {

std::optional<EvalScores> score_column(const std::vector<EvalPair>& pairs,
                                       const std::optional<std::string> EvalPair::*column, std::size_t& skipped,
                                       std::size_t& empty_texts) {
    std::vector<Tokens> cands, refs;
    double meteor_sum = 0, rouge_sum = 0;
    for (const auto& pair : pairs) {
        const auto& ref = pair.*column;
        if (!ref) {
            ++skipped;
            continue;
        }
        Tokens c = tokenize(pair.candidate), r = tokenize(*ref);
        if (c.empty() || r.empty()) {
            ++empty_texts;
        } else {
            meteor_sum += meteor(c, r);
            rouge_sum += rouge_l(c, r);
        }
        cands.push_back(std::move(c));
        refs.push_back(std::move(r));
    }
    if (cands.empty()) return std::nullopt;
    EvalScores s;
    s.pairs = cands.size();
    s.bleu = bleu(cands, refs);
    s.meteor = meteor_sum / static_cast<double>(s.pairs);
    s.rouge_l = rouge_sum / static_cast<double>(s.pairs);
    return s;
}

}  // namespace

EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs) {
    EvalReport report;
    report.total_pairs = pairs.size();
    report.reference_omg = score_column(pairs, &EvalPair::reference_omg, report.skipped_omg, report.empty_texts);
    report.reference_human =
        score_column(pairs, &EvalPair::reference_human, report.skipped_human, report.empty_texts);
    return report;
}

std::vector<EvalPair> load_eval_dataset(std::string_view jsonl) {
    std::vector<EvalPair> out;
    int lineno = 0;
    for (auto line : text::split_lines(jsonl)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
        EvalPair p;
        try {
            p.commit_id = j.value("commit_id", std::string());
            p.candidate = j.at("candidate").get<std::string>();
            if (j.contains("reference_omg") && !j["reference_omg"].is_null())
                p.reference_omg = j["reference_omg"].get<std::string>();
            if (j.contains("reference_human") && !j["reference_human"].is_null())
                p.reference_human = j["reference_human"].get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!p.reference_omg && !p.reference_human)
            throw Error("dataset line " + std::to_string(lineno) + ": record has no reference");
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string cell(const std::optional<EvalScores>& s, double EvalScores::*field) {
    return s ? fmt2((*s).*field) : std::string("-");
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

constexpr const char* kMetadata[] = {
    "tokenizer: lowercase, Unicode whitespace split, ASCII punctuation as separate tokens",
    "BLEU: corpus-level BLEU-4, zero counts smoothed to 1/(2*total_n), brevity penalty exp(1-r/c)",
    "METEOR: exact + Porter stem stages, no synonyms, latest-match alignment, Fmean=10PR/(R+9P), penalty 0.5*(chunks/m)^3",
    "aggregation: BLEU corpus-level; METEOR and ROUGE-L macro-averaged over pairs",
};

}  // namespace

std::string render_table(const EvalReport& r) {
    std::string out;
    out += "                 |       Reference OMG        |      Reference Human       \n";
    out += "                 |   BLEU  METEOR  ROUGE-L    |   BLEU  METEOR  ROUGE-L    \n";
    out += "-----------------+----------------------------+----------------------------\n";
    auto row = [&](const std::optional<EvalScores>& s) {
        return pad(cell(s, &EvalScores::bleu), 7) + pad(cell(s, &EvalScores::meteor), 8) +
               pad(cell(s, &EvalScores::rouge_l), 9) + "    ";
    };
    out += "Candidate        |" + row(r.reference_omg) + "|" + row(r.reference_human) + "\n";
    out += "\n";
    out += "pairs: " + std::to_string(r.total_pairs) + " (omg: " +
           std::to_string(r.reference_omg ? r.reference_omg->pairs : 0) + ", human: " +
           std::to_string(r.reference_human ? r.reference_human->pairs : 0) + ")\n";
    if (!r.reference_omg) out += "Reference OMG column absent: no records carry reference_omg\n";
    if (!r.reference_human) out += "Reference Human column absent: no records carry reference_human\n";
    if (r.empty_texts) out += "empty texts scored as 0: " + std::to_string(r.empty_texts) + "\n";
    for (const char* m : kMetadata) out += std::string("# ") + m + "\n";
    return out;
}

std::string render_json(const EvalReport& r) {
    auto scores = [](const std::optional<EvalScores>& s) -> nlohmann::json {
        if (!s) return nullptr;
        return {{"bleu", s->bleu}, {"meteor", s->meteor}, {"rouge_l", s->rouge_l}, {"pairs", s->pairs}};
    };
    nlohmann::json j{
        {"reference_omg", scores(r.reference_omg)},
        {"reference_human", scores(r.reference_human)},
        {"total_pairs", r.total_pairs},
        {"skipped", {{"reference_omg", r.skipped_omg}, {"reference_human", r.skipped_human}}},
        {"empty_texts", r.empty_texts},
        {"metadata", kMetadata},
    };
    return j.dump(2) + "\n";
}

}  // namespace omega::metrics
