//! End-to-end summarization of one cluster: features, graph, importance,
//! search and budget application.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corpus::DocumentCluster;
use crate::error::{Error, Result};
use crate::importance::ImportanceModel;
use crate::inference::{
    apply_word_limit, holistic_beam, holistic_exhaustive, holistic_greedy, individual_greedy, oracle_exact, Budget,
    Method, SelectionProblem, SummarySelection, DEFAULT_SAFETY_CAP,
};
use crate::similarity::{build_graph, build_tfidf, EmbeddingMatrix};
use crate::sri::SriConfig;

/// Tuned settings for the standard benchmark datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Duc,
    Tac,
    Multinews,
    Wikisum,
}

impl Preset {
    pub fn params(self) -> SummarizeParams {
        let base = SummarizeParams::default();
        match self {
            Preset::Duc => SummarizeParams {
                alpha: 0.9,
                theta: 0.0,
                lambda: 2f64.powi(-13),
                beam_size: 4,
                budget: Budget::Words(100),
                ..base
            },
            Preset::Tac => SummarizeParams {
                alpha: 0.9,
                theta: 0.0,
                lambda: 2f64.powi(-7),
                beam_size: 4,
                budget: Budget::Words(100),
                ..base
            },
            Preset::Multinews => SummarizeParams {
                alpha: 0.9,
                theta: 0.1,
                lambda: 2f64.powi(-4),
                beam_size: 4,
                budget: Budget::Sentences(10),
                ..base
            },
            Preset::Wikisum => SummarizeParams {
                alpha: 0.8,
                theta: 0.1,
                lambda: 2f64.powi(-6),
                beam_size: 3,
                budget: Budget::Sentences(5),
                ..base
            },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Duc => "duc",
            Preset::Tac => "tac",
            Preset::Multinews => "multinews",
            Preset::Wikisum => "wikisum",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "duc" => Ok(Preset::Duc),
            "tac" => Ok(Preset::Tac),
            "multinews" => Ok(Preset::Multinews),
            "wikisum" => Ok(Preset::Wikisum),
            _ => Err(Error::Config(format!("unknown preset {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummarizeParams {
    pub alpha: f64,
    pub theta: f64,
    pub lambda: f64,
    pub method: Method,
    pub beam_size: usize,
    pub prefilter_size: usize,
    pub budget: Budget,
    pub safety_cap: u64,
    pub trace: bool,
}

impl Default for SummarizeParams {
    fn default() -> Self {
        SummarizeParams {
            alpha: 0.9,
            theta: 0.1,
            lambda: 2f64.powi(-4),
            method: Method::Beam,
            beam_size: 4,
            prefilter_size: 15,
            budget: Budget::Sentences(10),
            safety_cap: DEFAULT_SAFETY_CAP,
            trace: false,
        }
    }
}

impl SummarizeParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("theta", self.theta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        SriConfig::new(self.lambda)?;
        self.budget.validate()?;
        if self.beam_size == 0 {
            return Err(Error::Config("beam size must be positive".into()));
        }
        if self.prefilter_size == 0 {
            return Err(Error::Config("prefilter size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub selection: SummarySelection,
    pub summary_text: String,
    pub elapsed_ms: f64,
}

/// One line of the selections file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRecord {
    pub id: String,
    pub selected_ids: Vec<usize>,
    pub summary_text: String,
    pub sri_score: f64,
    pub method: Method,
    /// `None` when timing is disabled for reproducible output.
    pub elapsed_ms: Option<f64>,
}

impl SelectionRecord {
    pub fn new(summary: &ClusterSummary, with_timing: bool) -> Self {
        SelectionRecord {
            id: summary.selection.cluster_id.clone(),
            selected_ids: summary.selection.selected.clone(),
            summary_text: summary.summary_text.clone(),
            sri_score: summary.selection.score,
            method: summary.selection.method,
            elapsed_ms: with_timing.then_some((summary.elapsed_ms * 1000.0).round() / 1000.0),
        }
    }
}

pub fn run_method(problem: &SelectionProblem<'_>, params: &SummarizeParams) -> Result<SummarySelection> {
    match params.method {
        Method::IndividualGreedy => individual_greedy(problem, params.budget),
        Method::HolisticGreedy => holistic_greedy(problem, params.budget),
        Method::Beam => holistic_beam(problem, params.budget, params.beam_size),
        Method::Exhaustive => holistic_exhaustive(problem, params.budget, params.prefilter_size),
        Method::Oracle => oracle_exact(problem, params.budget),
    }
}

/// Summarizes one cluster. External scores, when given, replace graph
/// centrality as the importance model.
pub fn summarize_cluster(
    cluster: &DocumentCluster,
    params: &SummarizeParams,
    embeddings: Option<&EmbeddingMatrix>,
    external_scores: Option<Vec<f64>>,
) -> Result<ClusterSummary> {
    let start = Instant::now();
    let run = || -> Result<(SummarySelection, String)> {
        params.validate()?;
        let tfidf = build_tfidf(cluster);
        let graph = build_graph(cluster, &tfidf, embeddings, params.alpha, params.theta)?;
        let importance = match external_scores {
            Some(scores) => {
                if scores.len() != cluster.len() {
                    return Err(Error::ScoreCount {
                        cluster: cluster.cluster_id.clone(),
                        scores: scores.len(),
                        sentences: cluster.len(),
                    });
                }
                ImportanceModel::from_scores(scores)?
            }
            None => ImportanceModel::from_graph(&graph),
        };
        let problem = SelectionProblem::new(&importance, &graph, SriConfig::new(params.lambda)?)?
            .with_cluster(cluster)?
            .with_trace(params.trace)
            .with_safety_cap(params.safety_cap);
        let selection = run_method(&problem, params)?;
        let text = apply_word_limit(&selection, cluster, params.budget);
        Ok((selection, text))
    };
    let (selection, summary_text) = run().map_err(|e| e.in_cluster(&cluster.cluster_id))?;
    Ok(ClusterSummary {
        selection,
        summary_text,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cluster() -> DocumentCluster {
        let docs = vec![
            vec![
                "The river flooded the old town overnight.".to_string(),
                "Residents were evacuated to the school gym.".to_string(),
            ],
            vec![
                "Floodwater covered the old town after the river rose overnight.".to_string(),
                "Officials expect the water to recede by Friday.".to_string(),
            ],
            vec!["The school gym sheltered hundreds of residents.".to_string()],
        ];
        DocumentCluster::from_documents("flood", docs, vec![]).unwrap().0
    }

    #[test]
    fn preset_values() {
        let m = Preset::Multinews.params();
        assert_eq!((m.alpha, m.theta, m.lambda, m.beam_size), (0.9, 0.1, 0.0625, 4));
        assert_eq!(m.budget, Budget::Sentences(10));
        let w = Preset::Wikisum.params();
        assert_eq!((w.alpha, w.theta, w.lambda, w.beam_size), (0.8, 0.1, 2f64.powi(-6), 3));
        assert_eq!(w.budget, Budget::Sentences(5));
        let d = Preset::Duc.params();
        assert_eq!((d.alpha, d.theta, d.lambda), (0.9, 0.0, 2f64.powi(-13)));
        assert_eq!(d.budget, Budget::Words(100));
        let t = Preset::Tac.params();
        assert_eq!((t.lambda, t.beam_size), (2f64.powi(-7), 4));
        assert_eq!("WikiSum".parse::<Preset>().unwrap(), Preset::Wikisum);
    }

    #[test]
    fn summarizes_with_every_method() {
        let c = cluster();
        for method in [
            Method::IndividualGreedy,
            Method::HolisticGreedy,
            Method::Beam,
            Method::Exhaustive,
            Method::Oracle,
        ] {
            let params = SummarizeParams {
                method,
                budget: Budget::Sentences(2),
                ..SummarizeParams::default()
            };
            let out = summarize_cluster(&c, &params, None, None).unwrap();
            assert_eq!(out.selection.selected.len(), 2, "{method}");
            assert!(!out.summary_text.is_empty());
        }
    }

    #[test]
    fn external_scores_must_align() {
        let err = summarize_cluster(&cluster(), &SummarizeParams::default(), None, Some(vec![1.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::ScoreCount {
                scores: 1,
                sentences: 5,
                ..
            }
        ));
    }

    #[test]
    fn invalid_params_are_config_errors() {
        let params = SummarizeParams {
            theta: 1.5,
            ..SummarizeParams::default()
        };
        let err = summarize_cluster(&cluster(), &params, None, None).unwrap_err();
        assert!(err.is_config(), "{err}");
        assert!(err.to_string().starts_with("cluster flood:"));
    }
}
