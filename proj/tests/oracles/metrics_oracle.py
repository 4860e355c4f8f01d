#!/usr/bin/env python3
"""Reference values for the metric tests.

Written independently of the C++ code: BLEU by explicit n-gram tuples and
Counter clipping, ROUGE-L by a memoized recursive LCS (and exhaustive
subsequence search for short inputs), METEOR by NLTK's meteor_score with an
empty synonym source and the original Porter algorithm.

Run:  python3 tests/oracles/metrics_oracle.py
The printed values are pasted into tests/metrics_test.cpp and the
acceptance binary; the random pairs go to tests/data/metric_fuzz.jsonl.
"""

import functools
import itertools
import json
import math
import string
import sys
from collections import Counter
from pathlib import Path

from nltk.stem.porter import PorterStemmer
from nltk.translate.meteor_score import single_meteor_score


def tokenize(text):
    out = []
    for word in text.split():  # str.split() splits on Unicode whitespace
        cur = ""
        for ch in word:
            if ch in string.punctuation:
                if cur:
                    out.append(cur)
                    cur = ""
                out.append(ch)
            else:
                cur += ch.lower() if ch.isascii() else ch
        if cur:
            out.append(cur)
    return out


def ngrams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def corpus_bleu(cands, refs):
    matched = [0] * 4
    total = [0] * 4
    c_len = sum(len(c) for c in cands)
    r_len = sum(len(r) for r in refs)
    for c, r in zip(cands, refs):
        for n in range(1, 5):
            cc = Counter(ngrams(c, n))
            rc = Counter(ngrams(r, n))
            total[n - 1] += sum(cc.values())
            matched[n - 1] += sum(min(k, rc[g]) for g, k in cc.items())
    if c_len == 0:
        return 0.0
    logs = []
    for m, t in zip(matched, total):
        if t == 0:
            continue
        p = m / t if m > 0 else 1.0 / (2.0 * t)
        logs.append(math.log(p))
    geo = math.exp(sum(logs) / len(logs))
    bp = math.exp(1 - r_len / c_len) if c_len < r_len else 1.0
    return 100.0 * bp * geo


def lcs(a, b):
    a, b = tuple(a), tuple(b)

    @functools.lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def lcs_brute(a, b):
    """Longest subsequence of `a` that is also a subsequence of `b`."""
    def is_subseq(s, t):
        it = iter(t)
        return all(x in it for x in s)

    for k in range(len(a), 0, -1):
        for idx in itertools.combinations(range(len(a)), k):
            if is_subseq([a[i] for i in idx], b):
                return k
    return 0


def rouge_l(c, r):
    l = lcs(c, r)
    if l == 0:
        return 0.0
    p, rec = l / len(c), l / len(r)
    return 100.0 * 2 * p * rec / (p + rec)


class NoSynonyms:
    def synsets(self, *args, **kwargs):
        return []


STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def meteor(c, r):
    return 100.0 * single_meteor_score(r, c, preprocess=lambda w: w, stemmer=STEMMER, wordnet=NoSynonyms())


def evaluate(path):
    rows = [json.loads(l) for l in Path(path).read_text(encoding="utf-8").splitlines() if l.strip()]
    out = {}
    for col in ("reference_omg", "reference_human"):
        pairs = [(tokenize(x["candidate"]), tokenize(x[col])) for x in rows if x.get(col) is not None]
        out[col] = {
            "pairs": len(pairs),
            "bleu": corpus_bleu([c for c, _ in pairs], [r for _, r in pairs]),
            "meteor": sum(meteor(c, r) for c, r in pairs) / len(pairs),
            "rouge_l": sum(rouge_l(c, r) for c, r in pairs) / len(pairs),
        }
    return out


FUZZ_VOCAB = ["fix", "fixes", "fixed", "fixing", "parser", "parsers", "parse", "the", "a", "bug", "bugs",
              "crash", "crashes", "read", "reading", "file", "files", "add", "added", "test", "tests", ".", ":"]


def fuzz_rows(count, seed):
    """Random pairs over a small vocabulary rich in shared stems."""
    import random
    rng = random.Random(seed)
    rows = []
    for _ in range(count):
        c = [rng.choice(FUZZ_VOCAB) for _ in range(rng.randint(1, 12))]
        r = [rng.choice(FUZZ_VOCAB) for _ in range(rng.randint(1, 12))]
        rows.append({"candidate": c, "reference": r, "bleu": corpus_bleu([c], [r]),
                     "meteor": meteor(c, r), "rouge_l": rouge_l(c, r)})
    return rows


def main():
    root = Path(__file__).resolve().parents[1]
    res = {}

    ident = [tokenize("fix: guard against null user in session lookup"), tokenize("add csv export")]
    res["bleu_identity"] = corpus_bleu(ident, ident)

    c, r = tokenize("the the the"), tokenize("the cat sat")
    res["bleu_the_the_the"] = corpus_bleu([c], [r])
    res["clipped_unigrams_the_the_the"] = sum(min(k, Counter(r)[g]) for g, k in Counter(c).items())

    cands = [[f"cand{p}x{k}" for k in range(20)] for p in range(50)]
    refs = [[f"ref{p}x{k}" for k in range(20)] for p in range(50)]
    res["bleu_disjoint_50x20"] = corpus_bleu(cands, refs)
    res["bleu_disjoint_short"] = corpus_bleu([tokenize("a b c")], [tokenize("d e f")])

    res["rouge_abcd_acd"] = rouge_l(list("abcd"), list("acd"))
    assert lcs(list("abcd"), list("acd")) == lcs_brute(list("abcd"), list("acd")) == 3

    res["meteor_identity_m3"] = meteor(["a", "b", "c"], ["a", "b", "c"])
    res["meteor_fixes_fixed"] = meteor(["fixes"], ["fixed"])
    res["meteor_repeated"] = meteor(tokenize("the fix the bug the"), tokenize("the bug fix in the parser"))
    res["meteor_stems_sentence"] = meteor(tokenize("Fixes crashing parsers when reading files"),
                                          tokenize("fixed a crash in the parser reading file"))

    res["eval10"] = evaluate(root / "data" / "eval10.jsonl")
    with open(root / "data" / "metric_fuzz.jsonl", "w", encoding="utf-8") as f:
        for row in fuzz_rows(300, 1234):
            f.write(json.dumps(row) + "\n")
    json.dump(res, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
