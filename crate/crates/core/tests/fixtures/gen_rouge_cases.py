"""Writes rouge_cases.json: expected ROUGE counts and exact scores computed
by brute force with rational arithmetic.

    python3 gen_rouge_cases.py > rouge_cases.json

Stemming uses nltk's PorterStemmer in ORIGINAL_ALGORITHM mode on tokens
longer than three characters. When the rouge-score package is installed the
unstemmed summary-level LCS values are cross-checked against it.
"""

import json
import re
import sys
from collections import Counter
from fractions import Fraction
from functools import lru_cache

from nltk.stem.porter import PorterStemmer

STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

CASES = [
    ("identity", "The cat sat on the mat.", ["The cat sat on the mat."], False, None),
    ("disjoint", "Red green blue.", ["Alpha beta gamma."], False, None),
    ("partial_unigram", "The cat sat on the mat.", ["The cat lay on the rug."], False, None),
    ("clip_repeats", "the the the the cat", ["the cat the dog"], False, None),
    ("order_swap", "a b c d e f", ["f e d c b a"], False, None),
    ("lcs_gap", "a x b y c z d", ["a b c d"], False, None),
    ("single_token", "storm", ["storm warning issued"], False, None),
    ("short_for_bigram", "flood", ["flood"], False, None),
    ("skip_boundary_in", "a p q r s b", ["a b"], False, None),
    ("skip_boundary_out", "a p q r s t b", ["a b"], False, None),
    ("skip_repeats", "a b a b a b", ["a b b a"], False, None),
    ("two_refs_pick_best", "the mayor approved the budget",
     ["the council rejected a plan", "the mayor approved a budget"], False, None),
    ("two_refs_tie_first", "x y", ["x z", "z y"], False, None),
    ("multi_sentence_sum", "W1 w2 w6 w7 w8. W1 w3 w8 w9 w5.", ["W1 w2 w3 w4 w5."], False, None),
    ("sum_two_ref_sentences", "The storm hit the coast. Power was lost.",
     ["Power was lost across the coast. The storm hit hard."], False, None),
    ("sum_clipping", "A a a. A a.", ["A a b. A c."], False, None),
    ("stemmed_plurals", "The cats were running quickly.", ["A cat runs quickly."], True, None),
    ("stemmed_vs_plain", "The cats were running quickly.", ["A cat runs quickly."], False, None),
    ("stem_short_tokens_kept", "dogs ran ponies", ["dog runs pony"], True, None),
    ("stem_generalization", "Generalizations relate oscillators.",
     ["General relational oscillation."], True, None),
    ("case_and_punctuation", "Hello, WORLD! It's 2024.", ["hello world its 2024"], False, None),
    ("word_limit_cut", "alpha beta zeta delta gamma epsilon",
     ["alpha beta gamma delta epsilon"], False, 4),
    ("word_limit_over_length", "alpha beta", ["alpha beta gamma"], False, 10),
    ("long_overlap", "officials said the river rose two feet overnight and crews built barriers",
     ["crews built barriers overnight after the river rose two feet officials said"], False, None),
    ("numbers_and_repeats", "3 3 4 4 5", ["3 4 5 3 4 5"], True, None),
]

VARIANTS = ["r1", "r2", "rl", "rlsum", "rsu4"]


def tokenize(text, stem):
    toks = re.findall(r"[a-z0-9]+", text.lower())
    if stem:
        toks = [STEMMER.stem(t) if len(t) > 3 else t for t in toks]
    return toks


def sentences(text, stem):
    parts = re.split(r"(?<=[.!?])\s+(?=[A-Z])", text.strip())
    out = [tokenize(p, stem) for p in parts]
    return [s for s in out if s]


def clipped(cand_units, ref_units):
    c, r = Counter(cand_units), Counter(ref_units)
    return sum(min(v, r[k]) for k, v in c.items())


def ngram_units(toks, n):
    return [tuple(toks[i:i + n]) for i in range(len(toks) - n + 1)]


def skip_units(toks):
    units = [(t,) for t in toks]
    for i in range(len(toks)):
        for j in range(i + 1, len(toks)):
            if j - i - 1 <= 4:
                units.append((toks[i], toks[j]))
    return units


def lcs(a, b):
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def lcs_ref_indices(ref, cand):
    n, m = len(ref), len(cand)
    t = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if ref[i - 1] == cand[j - 1]:
                t[i][j] = t[i - 1][j - 1] + 1
            else:
                t[i][j] = max(t[i - 1][j], t[i][j - 1])
    i, j, out = n, m, []
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1]:
            out.append(i - 1)
            i -= 1
            j -= 1
        elif t[i][j - 1] > t[i - 1][j]:
            j -= 1
        else:
            i -= 1
    return out


def summary_lcs_hits(cand_sents, ref_sents):
    cand_left = Counter(t for s in cand_sents for t in s)
    ref_left = Counter(t for s in ref_sents for t in s)
    hits = 0
    for r in ref_sents:
        union = sorted({i for c in cand_sents for i in lcs_ref_indices(r, c)})
        for i in union:
            tok = r[i]
            if cand_left[tok] > 0 and ref_left[tok] > 0:
                cand_left[tok] -= 1
                ref_left[tok] -= 1
                hits += 1
    return hits


def counts(variant, cand_sents, ref_sents):
    cand = [t for s in cand_sents for t in s]
    ref = [t for s in ref_sents for t in s]
    if variant == "r1":
        cu, ru = ngram_units(cand, 1), ngram_units(ref, 1)
        return clipped(cu, ru), len(cu), len(ru)
    if variant == "r2":
        cu, ru = ngram_units(cand, 2), ngram_units(ref, 2)
        return clipped(cu, ru), len(cu), len(ru)
    if variant == "rl":
        return lcs(cand, ref), len(cand), len(ref)
    if variant == "rlsum":
        return summary_lcs_hits(cand_sents, ref_sents), len(cand), len(ref)
    cu, ru = skip_units(cand), skip_units(ref)
    return clipped(cu, ru), len(cu), len(ru)


def score(h, c, r):
    if c == 0 or r == 0:
        return Fraction(0), Fraction(0), Fraction(0)
    return Fraction(h, c), Fraction(h, r), Fraction(2 * h, c + r)


def frac(f):
    return [f.numerator, f.denominator]


def cross_check(name, cand_sents, ref_sents, hits, c, r):
    try:
        from rouge_score import rouge_scorer
    except ImportError:
        return
    scorer = rouge_scorer.RougeScorer(["rougeLsum"], use_stemmer=False)
    got = scorer.score("\n".join(" ".join(s) for s in ref_sents), "\n".join(" ".join(s) for s in cand_sents))
    p, rec, _ = score(hits, c, r)
    s = got["rougeLsum"]
    if abs(s.precision - float(p)) > 1e-12 or abs(s.recall - float(rec)) > 1e-12:
        sys.exit(f"{name}: rouge-score disagrees ({s} vs {float(p)}, {float(rec)})")


def build(case):
    name, candidate, references, stem, limit = case
    cut = candidate if limit is None else " ".join(candidate.split()[:limit])
    cand_sents = sentences(cut, stem)
    ref_sents = [sentences(r, stem) for r in references]
    expected = {}
    for v in VARIANTS:
        per_ref = [counts(v, cand_sents, rs) for rs in ref_sents]
        scored = [score(*c) for c in per_ref]
        best = 0
        for i, s in enumerate(scored):
            if s[2] > scored[best][2]:
                best = i
        p, r, f = scored[best]
        expected[v] = {
            "per_ref": [list(c) for c in per_ref],
            "precision": frac(p),
            "recall": frac(r),
            "f1": frac(f),
        }
        if v == "rlsum" and not stem:
            for rs, (h, c, rr) in zip(ref_sents, per_ref):
                cross_check(name, cand_sents, rs, h, c, rr)
    return {
        "name": name,
        "candidate": candidate,
        "references": references,
        "stemming": stem,
        "word_limit": limit,
        "candidate_sentences": cand_sents,
        "reference_sentences": ref_sents,
        "expected": expected,
    }


def main():
    assert len(CASES) == 25
    json.dump([build(c) for c in CASES], sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
