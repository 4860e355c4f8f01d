#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omega::metrics {

using Tokens = std::vector<std::string>;

/// Lowercases ASCII, splits on Unicode whitespace and makes every ASCII
/// punctuation character its own token.
Tokens tokenize(std::string_view text);

/// Corpus BLEU-4 over aligned candidate/reference token lists, scaled to
/// [0,100]. A zero n-gram match count is replaced by 1/(2*total_n); orders
/// for which the corpus has no candidate n-grams are left out of the mean.
/// Throws EmptyCorpus.
double bleu(const std::vector<Tokens>& candidates, const std::vector<Tokens>& references);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// ROUGE-L F1 (beta = 1) scaled to [0,100]. Throws EmptyText.
double rouge_l(const Tokens& candidate, const Tokens& reference);

struct MeteorDetail {
    std::size_t matches = 0;
    std::size_t exact_matches = 0;
    std::size_t chunks = 0;
    double precision = 0;
    double recall = 0;
    double fmean = 0;
    double penalty = 0;
    double score = 0;  // [0,100]
};

/// METEOR with exact then Porter-stem unigram matching (no synonyms). Within
/// a stage the candidate is scanned from the end and each token takes the
/// latest unused reference token of the same form.
/// Throws EmptyText.
MeteorDetail meteor_detail(const Tokens& candidate, const Tokens& reference);
double meteor(const Tokens& candidate, const Tokens& reference);

struct EvalScores {
    double bleu = 0;
    double meteor = 0;
    double rouge_l = 0;
    std::size_t pairs = 0;
};

struct EvalPair {
    std::string commit_id;
    std::string candidate;
    std::optional<std::string> reference_omg;
    std::optional<std::string> reference_human;
};

struct EvalReport {
    std::optional<EvalScores> reference_omg;
    std::optional<EvalScores> reference_human;
    std::size_t total_pairs = 0;
    std::size_t skipped_omg = 0;
    std::size_t skipped_human = 0;
    /// Pairs where candidate or reference tokenized to nothing; scored 0.
    std::size_t empty_texts = 0;
};

/// Corpus BLEU per column, sentence METEOR/ROUGE-L averaged per column.
/// Pairs missing a column's reference are skipped for that column.
EvalReport evaluate_corpus(const std::vector<EvalPair>& pairs);

/// Reads line-delimited JSON records {commit_id, candidate, reference_omg?,
/// reference_human?}. Throws omega::Error on a malformed line or a record
/// without any reference.
std::vector<EvalPair> load_eval_dataset(std::string_view jsonl);

std::string render_table(const EvalReport& report);
std::string render_json(const EvalReport& report);

}  // namespace omega::metrics
