//! Sentence and subset importance.
//!
//! Graph importance is degree centrality on the thresholded edges; a subset's
//! importance is its cut weight to the rest of the cluster divided by the
//! cluster size. External importance wraps precomputed per-sentence scores
//! and sums them over a subset.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::DocumentCluster;
use crate::error::{Error, Result};
use crate::jsonl::{read_jsonl, LooseFloat};
use crate::similarity::SimilarityGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportanceKind {
    Graph,
    External,
}

#[derive(Debug, Clone)]
enum Source<'g> {
    Graph(&'g SimilarityGraph),
    External,
}

#[derive(Debug, Clone)]
pub struct ImportanceModel<'g> {
    source: Source<'g>,
    sentence_scores: Vec<f64>,
}

impl<'g> ImportanceModel<'g> {
    pub fn from_graph(graph: &'g SimilarityGraph) -> Self {
        let sentence_scores = (0..graph.n()).map(|i| graph.edge_row(i).iter().sum()).collect();
        ImportanceModel {
            source: Source::Graph(graph),
            sentence_scores,
        }
    }

    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite {
                cluster: String::new(),
                what: format!("importance score {i} is not finite"),
            });
        }
        if scores.iter().any(|&s| s < 0.0) {
            log::info!("external importance contains negative scores");
        }
        Ok(ImportanceModel {
            source: Source::External,
            sentence_scores: scores,
        })
    }

    pub fn kind(&self) -> ImportanceKind {
        match self.source {
            Source::Graph(_) => ImportanceKind::Graph,
            Source::External => ImportanceKind::External,
        }
    }

    pub fn len(&self) -> usize {
        self.sentence_scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentence_scores.is_empty()
    }

    pub fn sentence_scores(&self) -> &[f64] {
        &self.sentence_scores
    }

    pub fn sentence_importance(&self, i: usize) -> Result<f64> {
        self.sentence_scores.get(i).copied().ok_or(Error::OutOfRange {
            id: i,
            n: self.sentence_scores.len(),
        })
    }

    /// Importance of a whole subset. Ids must be in range and distinct.
    pub fn subset_importance(&self, subset: &[usize]) -> f64 {
        if subset.is_empty() {
            return 0.0;
        }
        match self.source {
            Source::External => subset.iter().map(|&i| self.sentence_scores[i]).sum(),
            Source::Graph(graph) => {
                let n = graph.n();
                let mut inside = vec![false; n];
                for &i in subset {
                    inside[i] = true;
                }
                let mut cut = 0.0;
                for &i in subset {
                    let row = graph.edge_row(i);
                    for (j, &e) in row.iter().enumerate() {
                        if !inside[j] {
                            cut += e;
                        }
                    }
                }
                cut / n as f64
            }
        }
    }
}

#[derive(Deserialize)]
struct ScoreLine {
    cluster_id: String,
    scores: Vec<LooseFloat>,
}

/// All records of an importance score file, keyed by cluster id.
#[derive(Debug, Clone, Default)]
pub struct ScoreStore {
    path: PathBuf,
    records: HashMap<String, Vec<f64>>,
}

impl ScoreStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let lines: Vec<ScoreLine> = read_jsonl(path)?;
        let records = lines
            .into_iter()
            .map(|l| (l.cluster_id, l.scores.into_iter().map(|v| v.0).collect()))
            .collect();
        Ok(ScoreStore {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn scores_for(&self, cluster: &DocumentCluster) -> Result<Vec<f64>> {
        let id = &cluster.cluster_id;
        let scores = self.records.get(id).ok_or_else(|| Error::MissingCluster {
            cluster: id.clone(),
            path: self.path.clone(),
        })?;
        validate_scores(scores, cluster)?;
        Ok(scores.clone())
    }

    pub fn model_for(&self, cluster: &DocumentCluster) -> Result<ImportanceModel<'static>> {
        ImportanceModel::from_scores(self.scores_for(cluster)?)
    }
}

fn validate_scores(scores: &[f64], cluster: &DocumentCluster) -> Result<()> {
    if scores.len() != cluster.len() {
        return Err(Error::ScoreCount {
            cluster: cluster.cluster_id.clone(),
            scores: scores.len(),
            sentences: cluster.len(),
        });
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite {
            cluster: cluster.cluster_id.clone(),
            what: format!("importance score {i} is not finite"),
        });
    }
    Ok(())
}

pub fn load_external_importance(path: impl AsRef<Path>, cluster: &DocumentCluster) -> Result<ImportanceModel<'static>> {
    ScoreStore::open(path)?.model_for(cluster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::io::Write;

    fn graph() -> SimilarityGraph {
        // e01 = 0.2, e02 = 0.4, e12 = 0
        let edges = vec![0.0, 0.2, 0.4, 0.2, 0.0, 0.0, 0.4, 0.0, 0.0];
        SimilarityGraph::from_edges("g", 3, edges).unwrap()
    }

    #[test]
    fn degree_centrality() {
        let g = graph();
        let m = ImportanceModel::from_graph(&g);
        assert_eq!(m.kind(), ImportanceKind::Graph);
        assert_abs_diff_eq!(m.sentence_importance(0).unwrap(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(m.sentence_importance(1).unwrap(), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(m.sentence_importance(2).unwrap(), 0.4, epsilon = 1e-12);
        assert!(matches!(
            m.sentence_importance(3),
            Err(Error::OutOfRange { id: 3, n: 3 })
        ));
    }

    #[test]
    fn isolated_node_has_zero_importance() {
        let g = SimilarityGraph::from_edges("g", 2, vec![0.0; 4]).unwrap();
        let m = ImportanceModel::from_graph(&g);
        assert_eq!(m.sentence_importance(1).unwrap(), 0.0);
    }

    #[test]
    fn subset_cut_importance() {
        let g = graph();
        let m = ImportanceModel::from_graph(&g);
        assert_abs_diff_eq!(m.subset_importance(&[0]), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(m.subset_importance(&[0, 1]), 0.4 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.subset_importance(&[1, 0]), 0.4 / 3.0, epsilon = 1e-12);
        assert_eq!(m.subset_importance(&[0, 1, 2]), 0.0);
        assert_eq!(m.subset_importance(&[]), 0.0);
    }

    #[test]
    fn external_scores() {
        let m = ImportanceModel::from_scores(vec![0.1, 0.7, 0.2]).unwrap();
        assert_eq!(m.kind(), ImportanceKind::External);
        assert_eq!(m.sentence_importance(1).unwrap(), 0.7);
        assert_abs_diff_eq!(m.subset_importance(&[0, 2]), 0.3, epsilon = 1e-12);
        assert!(ImportanceModel::from_scores(vec![0.1, f64::INFINITY]).is_err());
    }

    fn cluster3() -> DocumentCluster {
        DocumentCluster::from_documents("c1", vec![vec!["A.".into(), "B.".into(), "C.".into()]], vec![])
            .unwrap()
            .0
    }

    fn score_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "{contents}").unwrap();
        f
    }

    #[test]
    fn loads_score_file() {
        let f = score_file(r#"{"cluster_id":"c1","scores":[0.5,0.3,0.2]}"#);
        let m = load_external_importance(f.path(), &cluster3()).unwrap();
        assert_eq!(m.sentence_scores(), &[0.5, 0.3, 0.2]);
    }

    #[test]
    fn score_file_errors() {
        let f = score_file(r#"{"cluster_id":"c1","scores":[0.5,0.3]}"#);
        assert!(matches!(
            load_external_importance(f.path(), &cluster3()),
            Err(Error::ScoreCount {
                scores: 2,
                sentences: 3,
                ..
            })
        ));
        let f = score_file(r#"{"cluster_id":"c1","scores":[0.5,"NaN",0.2]}"#);
        assert!(matches!(
            load_external_importance(f.path(), &cluster3()),
            Err(Error::NonFinite { .. })
        ));
        let f = score_file(r#"{"cluster_id":"other","scores":[0.5,0.3,0.2]}"#);
        assert!(matches!(
            load_external_importance(f.path(), &cluster3()),
            Err(Error::MissingCluster { .. })
        ));
    }
}
