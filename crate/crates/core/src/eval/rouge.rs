//! ROUGE-N, ROUGE-L (sentence and summary level) and ROUGE-SU4.
//!
//! All counts are clipped: a candidate unit matches at most as many times as
//! it occurs in the reference. With several references the per-reference
//! scores are combined by [`MultiRef`].

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

/// Largest number of words allowed between the two words of a skip bigram.
pub const SKIP_DISTANCE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub fn from_counts(hits: usize, candidate_total: usize, reference_total: usize) -> Self {
        if candidate_total == 0 || reference_total == 0 {
            return RougeScore::default();
        }
        RougeScore {
            precision: hits as f64 / candidate_total as f64,
            recall: hits as f64 / reference_total as f64,
            f1: (2 * hits) as f64 / (candidate_total + reference_total) as f64,
        }
    }

    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        RougeScore { precision, recall, f1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiRef {
    /// Report the reference with the highest F1.
    #[default]
    Max,
    /// Component-wise mean over references.
    Average,
}

impl MultiRef {
    pub fn combine(self, scores: impl IntoIterator<Item = RougeScore>) -> RougeScore {
        let scores: Vec<RougeScore> = scores.into_iter().collect();
        if scores.is_empty() {
            return RougeScore::default();
        }
        match self {
            MultiRef::Max => scores
                .iter()
                .copied()
                .reduce(|best, s| if s.f1 > best.f1 { s } else { best })
                .unwrap_or_default(),
            MultiRef::Average => {
                let k = scores.len() as f64;
                RougeScore {
                    precision: scores.iter().map(|s| s.precision).sum::<f64>() / k,
                    recall: scores.iter().map(|s| s.recall).sum::<f64>() / k,
                    f1: scores.iter().map(|s| s.f1).sum::<f64>() / k,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LcsMode {
    /// LCS over the whole token sequences (ROUGE-L).
    Sentence,
    /// Union LCS per reference sentence (ROUGE-Lsum).
    SummaryLevel,
}

fn counts<K: Hash + Eq>(items: impl IntoIterator<Item = K>) -> HashMap<K, usize> {
    let mut map = HashMap::new();
    for k in items {
        *map.entry(k).or_insert(0) += 1;
    }
    map
}

fn clipped_overlap<K: Hash + Eq>(cand: &HashMap<K, usize>, reference: &HashMap<K, usize>) -> usize {
    cand.iter()
        .map(|(k, &c)| c.min(reference.get(k).copied().unwrap_or(0)))
        .sum()
}

fn as_strs<T: AsRef<str>>(tokens: &[T]) -> Vec<&str> {
    tokens.iter().map(AsRef::as_ref).collect()
}

fn ngrams<'a, 'b>(tokens: &'b [&'a str], n: usize) -> Vec<&'b [&'a str]> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    tokens.windows(n).collect()
}

/// Overlap counts `(hits, candidate n-grams, reference n-grams)` for one reference.
pub fn ngram_overlap<T: AsRef<str>, U: AsRef<str>>(
    candidate: &[T],
    reference: &[U],
    n: usize,
) -> (usize, usize, usize) {
    let (c, r) = (as_strs(candidate), as_strs(reference));
    let (cg, rg) = (ngrams(&c, n), ngrams(&r, n));
    let hits = clipped_overlap(&counts(cg.iter().copied()), &counts(rg.iter().copied()));
    (hits, cg.len(), rg.len())
}

pub fn rouge_n<T: AsRef<str>, U: AsRef<str>>(
    candidate: &[T],
    references: &[Vec<U>],
    n: usize,
    multi: MultiRef,
) -> RougeScore {
    multi.combine(references.iter().map(|r| {
        let (hits, c, rr) = ngram_overlap(candidate, r, n);
        RougeScore::from_counts(hits, c, rr)
    }))
}

fn lcs_table(a: &[&str], b: &[&str]) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            t[i][j] = if a[i - 1] == b[j - 1] {
                t[i - 1][j - 1] + 1
            } else {
                t[i - 1][j].max(t[i][j - 1])
            };
        }
    }
    t
}

pub fn lcs_len<T: AsRef<str>, U: AsRef<str>>(a: &[T], b: &[U]) -> usize {
    let (a, b) = (as_strs(a), as_strs(b));
    lcs_table(&a, &b)[a.len()][b.len()]
}

/// Positions in `reference` of one LCS with `candidate`.
fn lcs_positions(reference: &[&str], candidate: &[&str]) -> Vec<usize> {
    let t = lcs_table(reference, candidate);
    let (mut i, mut j) = (reference.len(), candidate.len());
    let mut out = Vec::new();
    while i > 0 && j > 0 {
        if reference[i - 1] == candidate[j - 1] {
            out.push(i - 1);
            i -= 1;
            j -= 1;
        } else if t[i][j - 1] > t[i - 1][j] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    out.reverse();
    out
}

/// Clipped union-LCS hits between sentence-split texts.
fn summary_level_hits(candidate: &[Vec<&str>], reference: &[Vec<&str>]) -> usize {
    let mut cand_left = counts(candidate.iter().flatten().copied());
    let mut ref_left = counts(reference.iter().flatten().copied());
    let mut hits = 0;
    for ref_sentence in reference {
        let mut union: Vec<usize> = candidate.iter().flat_map(|c| lcs_positions(ref_sentence, c)).collect();
        union.sort_unstable();
        union.dedup();
        for pos in union {
            let token = ref_sentence[pos];
            let (Some(c), Some(r)) = (cand_left.get_mut(token), ref_left.get_mut(token)) else {
                continue;
            };
            if *c > 0 && *r > 0 {
                *c -= 1;
                *r -= 1;
                hits += 1;
            }
        }
    }
    hits
}

/// ROUGE-L over sentence-split token lists. In [`LcsMode::Sentence`] the
/// sentences are concatenated first.
pub fn rouge_l<T: AsRef<str>, U: AsRef<str>>(
    candidate: &[Vec<T>],
    references: &[Vec<Vec<U>>],
    mode: LcsMode,
    multi: MultiRef,
) -> RougeScore {
    let cand: Vec<Vec<&str>> = candidate.iter().map(|s| as_strs(s)).collect();
    let cand_flat: Vec<&str> = cand.iter().flatten().copied().collect();
    multi.combine(references.iter().map(|r| {
        let refs: Vec<Vec<&str>> = r.iter().map(|s| as_strs(s)).collect();
        let ref_flat: Vec<&str> = refs.iter().flatten().copied().collect();
        let hits = match mode {
            LcsMode::Sentence => lcs_table(&cand_flat, &ref_flat)[cand_flat.len()][ref_flat.len()],
            LcsMode::SummaryLevel => summary_level_hits(&cand, &refs),
        };
        RougeScore::from_counts(hits, cand_flat.len(), ref_flat.len())
    }))
}

/// Unigrams plus skip bigrams with at most [`SKIP_DISTANCE`] words between
/// the pair; unigrams are keyed as one-element slices.
fn su_units<'a>(tokens: &[&'a str]) -> Vec<Vec<&'a str>> {
    let mut units: Vec<Vec<&str>> = tokens.iter().map(|t| vec![*t]).collect();
    for i in 0..tokens.len() {
        for j in (i + 1)..tokens.len().min(i + SKIP_DISTANCE + 2) {
            units.push(vec![tokens[i], tokens[j]]);
        }
    }
    units
}

/// Overlap counts `(hits, candidate units, reference units)` for ROUGE-SU4.
pub fn su4_overlap<T: AsRef<str>, U: AsRef<str>>(candidate: &[T], reference: &[U]) -> (usize, usize, usize) {
    let (c, r) = (su_units(&as_strs(candidate)), su_units(&as_strs(reference)));
    let hits = clipped_overlap(&counts(c.iter()), &counts(r.iter()));
    (hits, c.len(), r.len())
}

pub fn rouge_su4<T: AsRef<str>, U: AsRef<str>>(candidate: &[T], references: &[Vec<U>], multi: MultiRef) -> RougeScore {
    multi.combine(references.iter().map(|r| {
        let (hits, c, rr) = su4_overlap(candidate, r);
        RougeScore::from_counts(hits, c, rr)
    }))
}
