//! Summary evaluation: ROUGE against references and unique n-gram ratios.

pub mod porter;
mod report;
pub mod rouge;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{split_sentences, tokenize};
use crate::error::{Error, Result};

pub use report::{ClusterEval, EvalReport};
pub use rouge::{lcs_len, rouge_l, rouge_n, rouge_su4, LcsMode, MultiRef, RougeScore};

/// Orders of n used for the diversity ratios.
pub const DIVERSITY_ORDERS: [usize; 4] = [1, 2, 3, 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    R1,
    R2,
    Rl,
    Rlsum,
    Rsu4,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::R1, Variant::R2, Variant::Rl, Variant::Rlsum, Variant::Rsu4];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::R1 => "r1",
            Variant::R2 => "r2",
            Variant::Rl => "rl",
            Variant::Rlsum => "rlsum",
            Variant::Rsu4 => "rsu4",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown ROUGE variant {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RougeConfig {
    pub variants: Vec<Variant>,
    /// Porter-stem tokens longer than three characters.
    pub stemming: bool,
    /// Score only the first this-many words of each candidate.
    pub word_limit: Option<usize>,
    pub multi_ref: MultiRef,
}

impl Default for RougeConfig {
    fn default() -> Self {
        RougeConfig {
            variants: Variant::ALL.to_vec(),
            stemming: true,
            word_limit: None,
            multi_ref: MultiRef::Max,
        }
    }
}

impl RougeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(Error::Config("at least one ROUGE variant is required".into()));
        }
        if self.word_limit == Some(0) {
            return Err(Error::Config("ROUGE word limit must be positive".into()));
        }
        Ok(())
    }
}

/// First `limit` whitespace words of `text`, or all of it.
pub fn truncate_words(text: &str, limit: Option<usize>) -> String {
    match limit {
        Some(l) => text.split_whitespace().take(l).collect::<Vec<_>>().join(" "),
        None => text.to_string(),
    }
}

/// Sentence-split, tokenized (and optionally stemmed) text.
pub fn prepare(text: &str, stemming: bool) -> Vec<Vec<String>> {
    split_sentences(text)
        .iter()
        .map(|s| {
            tokenize(s)
                .into_iter()
                .map(|t| if stemming && t.len() > 3 { porter::stem(&t) } else { t })
                .collect::<Vec<_>>()
        })
        .filter(|s| !s.is_empty())
        .collect()
}

/// Scores one candidate text against reference texts.
pub fn score_rouge(candidate: &str, references: &[String], config: &RougeConfig) -> BTreeMap<Variant, RougeScore> {
    let cand = prepare(&truncate_words(candidate, config.word_limit), config.stemming);
    let refs: Vec<Vec<Vec<String>>> = references.iter().map(|r| prepare(r, config.stemming)).collect();
    let cand_flat: Vec<String> = cand.concat();
    let refs_flat: Vec<Vec<String>> = refs.iter().map(|r| r.concat()).collect();
    let multi = config.multi_ref;
    config
        .variants
        .iter()
        .map(|&v| {
            let score = match v {
                Variant::R1 => rouge_n(&cand_flat, &refs_flat, 1, multi),
                Variant::R2 => rouge_n(&cand_flat, &refs_flat, 2, multi),
                Variant::Rl => rouge_l(&cand, &refs, LcsMode::Sentence, multi),
                Variant::Rlsum => rouge_l(&cand, &refs, LcsMode::SummaryLevel, multi),
                Variant::Rsu4 => rouge_su4(&cand_flat, &refs_flat, multi),
            };
            (v, score)
        })
        .collect()
}

/// Distinct n-grams over total n-grams; 1 when there are fewer than `n` tokens.
pub fn uniq_ngram_ratio<T: AsRef<str>>(tokens: &[T], n: usize) -> f64 {
    if n == 0 || tokens.len() < n {
        return 1.0;
    }
    let tokens: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    let total = tokens.len() - n + 1;
    let distinct: HashSet<&[&str]> = tokens.windows(n).collect();
    distinct.len() as f64 / total as f64
}

/// Unique n-gram ratios of a summary text for n = 1..=4.
pub fn diversity(text: &str) -> [f64; 4] {
    let tokens = tokenize(text);
    DIVERSITY_ORDERS.map(|n| uniq_ngram_ratio(&tokens, n))
}

pub fn evaluate_cluster(id: &str, summary: &str, references: &[String], config: &RougeConfig) -> ClusterEval {
    ClusterEval {
        id: id.to_string(),
        rouge: (!references.is_empty()).then(|| score_rouge(summary, references, config)),
        uniq_ngram_ratio: diversity(&truncate_words(summary, config.word_limit)),
    }
}
