//! Subset Representative Index: `M(S') = I(S') - lambda * R(S')`.
//!
//! `R(S')` sums, over the members of a subset, the edge weight to each
//! member's most similar other member.

use crate::error::{Error, Result};
use crate::importance::{ImportanceKind, ImportanceModel};
use crate::similarity::SimilarityGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SriConfig {
    pub lambda: f64,
}

impl SriConfig {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda >= 0.0 {
            Ok(SriConfig { lambda })
        } else {
            Err(Error::Config(format!(
                "lambda must be finite and nonnegative, got {lambda}"
            )))
        }
    }
}

pub fn redundancy(graph: &SimilarityGraph, subset: &[usize]) -> f64 {
    if subset.len() < 2 {
        return 0.0;
    }
    subset
        .iter()
        .map(|&i| {
            subset
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| graph.edge(i, j))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .sum()
}

pub fn sri_score(
    importance: &ImportanceModel<'_>,
    graph: &SimilarityGraph,
    subset: &[usize],
    config: &SriConfig,
) -> f64 {
    if subset.is_empty() {
        return 0.0;
    }
    importance.subset_importance(subset) - config.lambda * redundancy(graph, subset)
}

/// Evaluates `M` on many candidate subsets of one cluster. Graph importance
/// is computed from cached degrees as `(sum deg - 2 * internal) / n`, which
/// costs `O(|S'|^2)` per subset instead of `O(|S'| n)`.
#[derive(Debug, Clone)]
pub struct SriObjective<'a> {
    graph: &'a SimilarityGraph,
    scores: &'a [f64],
    kind: ImportanceKind,
    lambda: f64,
}

impl<'a> SriObjective<'a> {
    pub fn new(importance: &'a ImportanceModel<'_>, graph: &'a SimilarityGraph, config: SriConfig) -> Result<Self> {
        if importance.len() != graph.n() {
            return Err(Error::Config(format!(
                "importance covers {} sentences but the graph has {}",
                importance.len(),
                graph.n()
            )));
        }
        Ok(SriObjective {
            graph,
            scores: importance.sentence_scores(),
            kind: importance.kind(),
            lambda: config.lambda,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn sentence_score(&self, i: usize) -> f64 {
        self.scores[i]
    }

    /// `M` of a subset; summation follows the slice order, so callers pass
    /// canonical (sorted) subsets when they compare scores.
    pub fn score(&self, subset: &[usize]) -> f64 {
        if subset.is_empty() {
            return 0.0;
        }
        let mut importance: f64 = subset.iter().map(|&i| self.scores[i]).sum();
        let mut redundancy = 0.0;
        let mut internal = 0.0;
        for (a, &i) in subset.iter().enumerate() {
            let row = self.graph.edge_row(i);
            let mut best = f64::NEG_INFINITY;
            for (b, &j) in subset.iter().enumerate() {
                if a == b {
                    continue;
                }
                let e = row[j];
                best = best.max(e);
                if b > a {
                    internal += e;
                }
            }
            if subset.len() > 1 {
                redundancy += best;
            }
        }
        if self.kind == ImportanceKind::Graph {
            importance = (importance - 2.0 * internal) / self.graph.n() as f64;
        }
        importance - self.lambda * redundancy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn graph3(e01: f64, e02: f64, e12: f64) -> SimilarityGraph {
        let edges = vec![0.0, e01, e02, e01, 0.0, e12, e02, e12, 0.0];
        SimilarityGraph::from_edges("g", 3, edges).unwrap()
    }

    #[test]
    fn redundancy_examples() {
        let g = graph3(0.4, 0.0, 0.0);
        assert_abs_diff_eq!(redundancy(&g, &[0, 1]), 0.8, epsilon = 1e-12);
        assert_eq!(redundancy(&g, &[2]), 0.0);
        assert_eq!(redundancy(&g, &[]), 0.0);
        let g = graph3(0.5, 0.1, 0.3);
        assert_abs_diff_eq!(redundancy(&g, &[0, 1, 2]), 1.3, epsilon = 1e-12);
    }

    #[test]
    fn sri_arithmetic() {
        // I({0,1}) = (0.4)/3 with e01=0.4 inside the subset
        let g = graph3(0.4, 0.2, 0.2);
        let m = ImportanceModel::from_graph(&g);
        let cfg = SriConfig::new(2f64.powi(-4)).unwrap();
        let i = m.subset_importance(&[0, 1]);
        assert_abs_diff_eq!(i, 0.4 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sri_score(&m, &g, &[0, 1], &cfg), 0.4 / 3.0 - 0.05, epsilon = 1e-12);
        let zero = SriConfig::new(0.0).unwrap();
        assert_eq!(sri_score(&m, &g, &[0, 1], &zero), i);
        assert_eq!(sri_score(&m, &g, &[], &cfg), 0.0);
    }

    #[test]
    fn rejects_bad_lambda() {
        assert!(SriConfig::new(-1.0).is_err());
        assert!(SriConfig::new(f64::NAN).is_err());
        assert!(SriConfig::new(f64::INFINITY).is_err());
    }

    #[test]
    fn objective_matches_direct_score() {
        let g = graph3(0.5, 0.1, 0.3);
        let cfg = SriConfig::new(0.25).unwrap();
        let graph_model = ImportanceModel::from_graph(&g);
        let external = ImportanceModel::from_scores(vec![0.3, -0.2, 0.9]).unwrap();
        for model in [&graph_model, &external] {
            let obj = SriObjective::new(model, &g, cfg).unwrap();
            for subset in [&[][..], &[1], &[0, 2], &[0, 1, 2]] {
                assert_abs_diff_eq!(obj.score(subset), sri_score(model, &g, subset, &cfg), epsilon = 1e-12);
            }
        }
    }
}
