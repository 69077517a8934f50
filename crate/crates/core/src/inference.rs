//! Summary subset selection.
//!
//! Every method scores candidate subsets with [`SriObjective`] on the
//! canonical (sorted) id list, so equal sets always receive bit-identical
//! scores. Ties between sets go to the lexicographically smaller sorted id
//! list; ties between single-sentence extensions go to the lower id.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::DocumentCluster;
use crate::error::{Error, Result};
use crate::importance::ImportanceModel;
use crate::similarity::SimilarityGraph;
use crate::sri::{sri_score, SriConfig, SriObjective};

pub const DEFAULT_SAFETY_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    IndividualGreedy,
    HolisticGreedy,
    Beam,
    Exhaustive,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::IndividualGreedy => "individual_greedy",
            Method::HolisticGreedy => "holistic_greedy",
            Method::Beam => "beam",
            Method::Exhaustive => "exhaustive",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "individual_greedy" => Ok(Method::IndividualGreedy),
            "holistic_greedy" => Ok(Method::HolisticGreedy),
            "beam" => Ok(Method::Beam),
            "exhaustive" => Ok(Method::Exhaustive),
            "oracle" => Ok(Method::Oracle),
            _ => Err(Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

/// Summary length budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Select exactly this many sentences (or all, for smaller clusters).
    Sentences(usize),
    /// Add sentences until the word count first reaches this limit.
    Words(usize),
}

impl Budget {
    pub fn validate(self) -> Result<Self> {
        match self {
            Budget::Sentences(0) | Budget::Words(0) => Err(Error::Config("budget must be positive".into())),
            b => Ok(b),
        }
    }

    pub fn word_limit(self) -> Option<usize> {
        match self {
            Budget::Words(w) => Some(w),
            Budget::Sentences(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// Candidate subsets scored during this step.
    pub candidates: usize,
    pub best_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummarySelection {
    pub cluster_id: String,
    /// Global sentence ids in selection order.
    pub selected: Vec<usize>,
    pub score: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl SummarySelection {
    pub fn sorted_ids(&self) -> Vec<usize> {
        let mut ids = self.selected.clone();
        ids.sort_unstable();
        ids
    }
}

/// Everything a search needs about one cluster.
#[derive(Debug, Clone)]
pub struct SelectionProblem<'a> {
    cluster_id: String,
    importance: &'a ImportanceModel<'a>,
    graph: &'a SimilarityGraph,
    config: SriConfig,
    objective: SriObjective<'a>,
    word_counts: Vec<usize>,
    trace: bool,
    safety_cap: u64,
}

impl<'a> SelectionProblem<'a> {
    pub fn new(importance: &'a ImportanceModel<'a>, graph: &'a SimilarityGraph, config: SriConfig) -> Result<Self> {
        Ok(SelectionProblem {
            cluster_id: graph.cluster_id.clone(),
            objective: SriObjective::new(importance, graph, config)?,
            importance,
            graph,
            config,
            word_counts: vec![1; graph.n()],
            trace: false,
            safety_cap: DEFAULT_SAFETY_CAP,
        })
    }

    /// Uses the cluster's per-sentence word counts for word budgets.
    pub fn with_cluster(mut self, cluster: &DocumentCluster) -> Result<Self> {
        self.cluster_id.clone_from(&cluster.cluster_id);
        self.with_word_counts(cluster.word_counts())
    }

    pub fn with_word_counts(mut self, word_counts: Vec<usize>) -> Result<Self> {
        if word_counts.len() != self.n() {
            return Err(Error::Config(format!(
                "{} word counts for {} sentences",
                word_counts.len(),
                self.n()
            )));
        }
        self.word_counts = word_counts;
        Ok(self)
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_safety_cap(mut self, cap: u64) -> Self {
        self.safety_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn objective(&self) -> &SriObjective<'a> {
        &self.objective
    }

    /// `M` of an arbitrary subset, recomputed from scratch.
    pub fn score(&self, subset: &[usize]) -> f64 {
        sri_score(self.importance, self.graph, subset, &self.config)
    }

    /// Sentence ids by decreasing importance, lower id first on ties.
    pub fn ranking(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.n()).collect();
        ids.sort_by(|&a, &b| {
            self.objective
                .sentence_score(b)
                .total_cmp(&self.objective.sentence_score(a))
                .then(a.cmp(&b))
        });
        ids
    }

    fn words(&self, ids: &[usize]) -> usize {
        ids.iter().map(|&i| self.word_counts[i]).sum()
    }

    fn is_complete(&self, budget: Budget, ids: &[usize]) -> bool {
        if ids.len() >= self.n() {
            return true;
        }
        match budget {
            Budget::Sentences(k) => ids.len() >= k,
            Budget::Words(w) => self.words(ids) >= w,
        }
    }

    fn finish(&self, selected: Vec<usize>, method: Method, trace: Vec<TraceStep>) -> SummarySelection {
        let mut sorted = selected.clone();
        sorted.sort_unstable();
        SummarySelection {
            cluster_id: self.cluster_id.clone(),
            score: self.score(&sorted),
            selected,
            method,
            trace: self.trace.then_some(trace),
        }
    }
}

/// Orders by score descending, then lexicographically by sorted ids.
fn cmp_sets(a_score: f64, a_set: &[usize], b_score: f64, b_set: &[usize]) -> Ordering {
    b_score.total_cmp(&a_score).then_with(|| a_set.cmp(b_set))
}

fn with_inserted(sorted: &[usize], id: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(sorted.len() + 1);
    let at = sorted.partition_point(|&x| x < id);
    out.extend_from_slice(&sorted[..at]);
    out.push(id);
    out.extend_from_slice(&sorted[at..]);
    out
}

/// Ranks sentences individually and takes them in rank order.
pub fn individual_greedy(problem: &SelectionProblem<'_>, budget: Budget) -> Result<SummarySelection> {
    let budget = budget.validate()?;
    let mut selected = Vec::new();
    let mut trace = Vec::new();
    for id in problem.ranking() {
        if problem.is_complete(budget, &selected) {
            break;
        }
        selected.push(id);
        trace.push(TraceStep {
            step: selected.len(),
            candidates: 1,
            best_score: problem.objective.sentence_score(id),
        });
    }
    Ok(problem.finish(selected, Method::IndividualGreedy, trace))
}

/// Adds, one at a time, the sentence maximizing `M` of the grown subset.
pub fn holistic_greedy(problem: &SelectionProblem<'_>, budget: Budget) -> Result<SummarySelection> {
    let budget = budget.validate()?;
    let mut selected = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    while !problem.is_complete(budget, &selected) {
        let mut best: Option<(usize, f64)> = None;
        let mut evaluated = 0;
        for s in 0..problem.n() {
            if current.binary_search(&s).is_ok() {
                continue;
            }
            let score = problem.objective.score(&with_inserted(&current, s));
            evaluated += 1;
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((s, score));
            }
        }
        let Some((s, score)) = best else { break };
        selected.push(s);
        current = with_inserted(&current, s);
        trace.push(TraceStep {
            step: selected.len(),
            candidates: evaluated,
            best_score: score,
        });
    }
    Ok(problem.finish(selected, Method::HolisticGreedy, trace))
}

#[derive(Debug, Clone)]
struct BeamEntry {
    order: Vec<usize>,
    set: Vec<usize>,
    score: f64,
}

impl BeamEntry {
    fn cmp_rank(&self, other: &Self) -> Ordering {
        cmp_sets(self.score, &self.set, other.score, &other.set).then_with(|| self.order.cmp(&other.order))
    }
}

/// Beam search over growing subsets.
///
/// Each step expands every unfinished beam member by its `k` best
/// single-sentence extensions, merges the pool, drops duplicate sets (the
/// same set reached in a different order) and keeps the `k` best sets.
pub fn holistic_beam(problem: &SelectionProblem<'_>, budget: Budget, beam_size: usize) -> Result<SummarySelection> {
    let budget = budget.validate()?;
    if beam_size == 0 {
        return Err(Error::Config("beam size must be positive".into()));
    }
    let mut beam = vec![BeamEntry {
        order: Vec::new(),
        set: Vec::new(),
        score: 0.0,
    }];
    let mut trace = Vec::new();
    let mut step = 0;
    while beam.iter().any(|b| !problem.is_complete(budget, &b.order)) {
        step += 1;
        let mut pool = Vec::new();
        let mut evaluated = 0;
        for entry in &beam {
            if problem.is_complete(budget, &entry.order) {
                pool.push(entry.clone());
                continue;
            }
            let mut extensions: Vec<(usize, Vec<usize>, f64)> = (0..problem.n())
                .filter(|s| entry.set.binary_search(s).is_err())
                .map(|s| {
                    let set = with_inserted(&entry.set, s);
                    let score = problem.objective.score(&set);
                    (s, set, score)
                })
                .collect();
            evaluated += extensions.len();
            extensions.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
            for (s, set, score) in extensions.into_iter().take(beam_size) {
                let mut order = entry.order.clone();
                order.push(s);
                pool.push(BeamEntry { order, set, score });
            }
        }
        pool.sort_by(BeamEntry::cmp_rank);
        pool.dedup_by(|later, earlier| later.set == earlier.set);
        pool.truncate(beam_size);
        trace.push(TraceStep {
            step,
            candidates: evaluated,
            best_score: pool.first().map_or(f64::NEG_INFINITY, |b| b.score),
        });
        beam = pool;
    }
    let best = beam
        .into_iter()
        .min_by(BeamEntry::cmp_rank)
        .map(|b| b.order)
        .unwrap_or_default();
    Ok(problem.finish(best, Method::Beam, trace))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exhaustive search restricted to `pool` (sorted ascending).
fn enumerate_best(
    problem: &SelectionProblem<'_>,
    budget: Budget,
    pool: &[usize],
    method: Method,
) -> Result<SummarySelection> {
    let p = pool.len();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut evaluated = 0usize;
    let mut consider = |set: Vec<usize>| {
        let score = problem.objective.score(&set);
        evaluated += 1;
        let better = match &best {
            None => true,
            Some((b_set, b_score)) => cmp_sets(score, &set, *b_score, b_set) == Ordering::Less,
        };
        if better {
            best = Some((set, score));
        }
    };

    match budget {
        Budget::Sentences(k) => {
            let k = k.min(p);
            let count = binomial(p, k);
            if count > problem.safety_cap as u128 {
                return Err(Error::SearchSpace {
                    subsets: count,
                    cap: problem.safety_cap,
                });
            }
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                consider(idx.iter().map(|&i| pool[i]).collect());
                // next combination in lexicographic order
                let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + p - k) else {
                    break;
                };
                idx[pos] += 1;
                for j in (pos + 1)..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        Budget::Words(limit) => {
            // Feasible sets are those a word-budgeted greedy pass could end
            // with: the limit is reached, and dropping the longest member
            // falls below it. The whole pool is feasible when it is short.
            if p >= 64 || (1u128 << p) > problem.safety_cap as u128 {
                return Err(Error::SearchSpace {
                    subsets: if p >= 128 { u128::MAX } else { 1u128 << p },
                    cap: problem.safety_cap,
                });
            }
            let full = (1u64 << p) - 1;
            for mask in 1..=full {
                let set: Vec<usize> = (0..p).filter(|&b| mask >> b & 1 == 1).map(|b| pool[b]).collect();
                let words = problem.words(&set);
                let longest = set.iter().map(|&i| problem.word_counts[i]).max().unwrap_or(0);
                let feasible = words - longest < limit && (words >= limit || mask == full);
                if feasible {
                    consider(set);
                }
            }
        }
    }
    let (set, score) = best.unwrap_or_default();
    let trace = vec![TraceStep {
        step: 1,
        candidates: evaluated,
        best_score: score,
    }];
    Ok(problem.finish(set, method, trace))
}

/// Enumerates every budget-sized subset of the `prefilter_size` most
/// important sentences.
pub fn holistic_exhaustive(
    problem: &SelectionProblem<'_>,
    budget: Budget,
    prefilter_size: usize,
) -> Result<SummarySelection> {
    let budget = budget.validate()?;
    let needed = match budget {
        Budget::Sentences(k) => k.min(problem.n()),
        Budget::Words(_) => 1,
    };
    if prefilter_size < needed {
        return Err(Error::Config(format!(
            "prefilter size {prefilter_size} is smaller than the {needed} sentences to select"
        )));
    }
    let mut pool: Vec<usize> = problem.ranking().into_iter().take(prefilter_size).collect();
    pool.sort_unstable();
    enumerate_best(problem, budget, &pool, Method::Exhaustive)
}

/// Exact argmax of `M` over all budget-sized subsets of the cluster.
pub fn oracle_exact(problem: &SelectionProblem<'_>, budget: Budget) -> Result<SummarySelection> {
    let budget = budget.validate()?;
    let pool: Vec<usize> = (0..problem.n()).collect();
    enumerate_best(problem, budget, &pool, Method::Oracle)
}

/// Concatenates the selected sentences in selection order; under a word
/// budget the text is cut to exactly that many whitespace words.
pub fn apply_word_limit(selection: &SummarySelection, cluster: &DocumentCluster, budget: Budget) -> String {
    let text = selection
        .selected
        .iter()
        .map(|&i| cluster.sentences[i].text.trim())
        .collect::<Vec<_>>()
        .join(" ");
    match budget.word_limit() {
        Some(limit) if text.split_whitespace().count() > limit => {
            text.split_whitespace().take(limit).collect::<Vec<_>>().join(" ")
        }
        _ => text,
    }
}
