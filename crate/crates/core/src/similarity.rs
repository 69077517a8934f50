//! Sentence similarity: per-cluster TF-IDF, ingested embeddings, the blended
//! pairwise similarity and the thresholded edge matrix.
//!
//! Both vector families are L2-normalized so every dot product is a cosine.
//! Edges are `max(sim - t, 0)` where `t = min + theta * (max - min)` over the
//! off-diagonal similarities of the cluster.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::DocumentCluster;
use crate::error::{Error, Result};
use crate::jsonl::{read_jsonl, LooseFloat};

/// Sparse TF-IDF vector; `weights` is sorted by term id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TfidfVector {
    pub weights: Vec<(u32, f64)>,
    /// L2 norm of `weights`: 1 for any sentence with tokens, 0 otherwise.
    pub norm: f64,
}

impl TfidfVector {
    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dot(&self, other: &TfidfVector) -> f64 {
        let (mut a, mut b) = (self.weights.iter().peekable(), other.weights.iter().peekable());
        let mut sum = 0.0;
        while let (Some(&&(ta, wa)), Some(&&(tb, wb))) = (a.peek(), b.peek()) {
            match ta.cmp(&tb) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    a.next();
                    b.next();
                }
            }
        }
        sum
    }
}

/// TF-IDF model of one cluster: every sentence is a document.
#[derive(Debug, Clone)]
pub struct TfidfIndex {
    terms: Vec<String>,
    idf: Vec<f64>,
    vectors: Vec<TfidfVector>,
}

impl TfidfIndex {
    pub fn vectors(&self) -> &[TfidfVector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &TfidfVector {
        &self.vectors[i]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn idf(&self, term: &str) -> Option<f64> {
        self.terms
            .binary_search_by(|t| t.as_str().cmp(term))
            .ok()
            .map(|i| self.idf[i])
    }
}

/// Smooth idf `ln((1 + N) / (1 + df)) + 1`, raw term counts, L2 normalization.
pub fn build_tfidf(cluster: &DocumentCluster) -> TfidfIndex {
    let n = cluster.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &cluster.sentences {
        let mut seen: Vec<&str> = s.tokens.iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *df.entry(t).or_default() += 1;
        }
    }
    let ids: HashMap<&str, u32> = df.keys().enumerate().map(|(i, t)| (*t, i as u32)).collect();
    let idf: Vec<f64> = df
        .values()
        .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
        .collect();

    let vectors = cluster
        .sentences
        .iter()
        .map(|s| {
            let mut tf: BTreeMap<u32, f64> = BTreeMap::new();
            for t in &s.tokens {
                *tf.entry(ids[t.as_str()]).or_default() += 1.0;
            }
            let mut weights: Vec<(u32, f64)> = tf
                .into_iter()
                .map(|(id, count)| (id, count * idf[id as usize]))
                .collect();
            let norm = weights.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
            if norm > 0.0 {
                for (_, w) in &mut weights {
                    *w /= norm;
                }
            }
            TfidfVector {
                norm: if weights.is_empty() { 0.0 } else { 1.0 },
                weights,
            }
        })
        .collect();

    TfidfIndex {
        terms: df.keys().map(|t| t.to_string()).collect(),
        idf,
        vectors,
    }
}

/// One line of the embedding JSONL file.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EmbeddingRecord {
    pub cluster_id: String,
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct EmbeddingLine {
    cluster_id: String,
    dim: usize,
    vectors: Vec<Vec<LooseFloat>>,
}

impl From<EmbeddingLine> for EmbeddingRecord {
    fn from(line: EmbeddingLine) -> Self {
        EmbeddingRecord {
            cluster_id: line.cluster_id,
            dim: line.dim,
            vectors: line
                .vectors
                .into_iter()
                .map(|row| row.into_iter().map(|v| v.0).collect())
                .collect(),
        }
    }
}

/// Unit-normalized sentence embeddings of one cluster, in `global_id` order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    pub cluster_id: String,
    pub dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl EmbeddingMatrix {
    /// Validates rows against `cluster` and normalizes them to unit length.
    pub fn from_record(record: EmbeddingRecord, cluster: &DocumentCluster) -> Result<Self> {
        let cluster_id = cluster.cluster_id.clone();
        if record.vectors.len() != cluster.len() {
            return Err(Error::EmbeddingRows {
                cluster: cluster_id,
                rows: record.vectors.len(),
                sentences: cluster.len(),
            });
        }
        if record.dim == 0 {
            return Err(Error::EmbeddingDim {
                cluster: cluster_id,
                row: 0,
                found: 0,
                dim: 0,
            });
        }
        let mut vectors = record.vectors;
        for (row, v) in vectors.iter_mut().enumerate() {
            if v.len() != record.dim {
                return Err(Error::EmbeddingDim {
                    cluster: cluster_id,
                    row,
                    found: v.len(),
                    dim: record.dim,
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    cluster: cluster_id,
                    what: format!("embedding row {row} has a non-finite value"),
                });
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::NonFinite {
                    cluster: cluster_id,
                    what: format!("embedding row {row} cannot be normalized (norm {norm})"),
                });
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
        }
        Ok(EmbeddingMatrix {
            cluster_id,
            dim: record.dim,
            vectors,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum()
    }
}

/// All records of an embedding file, keyed by cluster id.
#[derive(Debug, Clone, Default)]
pub struct EmbeddingStore {
    path: PathBuf,
    records: HashMap<String, EmbeddingRecord>,
}

impl EmbeddingStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let lines: Vec<EmbeddingLine> = read_jsonl(path)?;
        let records = lines
            .into_iter()
            .map(|l| (l.cluster_id.clone(), EmbeddingRecord::from(l)))
            .collect();
        Ok(EmbeddingStore {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn matrix_for(&self, cluster: &DocumentCluster) -> Result<EmbeddingMatrix> {
        let record = self
            .records
            .get(&cluster.cluster_id)
            .ok_or_else(|| Error::MissingCluster {
                cluster: cluster.cluster_id.clone(),
                path: self.path.clone(),
            })?;
        EmbeddingMatrix::from_record(record.clone(), cluster)
    }
}

pub fn load_embeddings(path: impl AsRef<Path>, cluster: &DocumentCluster) -> Result<EmbeddingMatrix> {
    EmbeddingStore::open(path)?.matrix_for(cluster)
}

/// `alpha * tfidf_cos + (1 - alpha) * embedding_cos`; pure TF-IDF when the
/// embedding pair is absent.
pub fn combined_similarity(
    c_i: &TfidfVector,
    c_j: &TfidfVector,
    embeddings: Option<(&[f64], &[f64])>,
    alpha: f64,
) -> f64 {
    let lexical = c_i.dot(c_j);
    match embeddings {
        None => lexical,
        Some((r_i, r_j)) => {
            let semantic: f64 = r_i.iter().zip(r_j).map(|(a, b)| a * b).sum();
            alpha * lexical + (1.0 - alpha) * semantic
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")))
    }
}

/// Symmetric similarity graph of one cluster with thresholded edges.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub cluster_id: String,
    n: usize,
    raw: Vec<f64>,
    edges: Vec<f64>,
    theta: f64,
    alpha: f64,
    threshold_value: f64,
}

impl SimilarityGraph {
    /// Thresholds a row-major `n x n` similarity matrix. The diagonal is
    /// ignored and stored as 0.
    pub fn from_raw(
        cluster_id: impl Into<String>,
        n: usize,
        mut raw: Vec<f64>,
        alpha: f64,
        theta: f64,
    ) -> Result<Self> {
        check_unit("alpha", alpha)?;
        check_unit("theta", theta)?;
        if n == 0 || raw.len() != n * n {
            return Err(Error::Config(format!(
                "similarity matrix of {} values is not {n} x {n}",
                raw.len()
            )));
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            raw[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let (a, b) = (raw[i * n + j], raw[j * n + i]);
                if !a.is_finite() || (a - b).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "similarity matrix is not finite and symmetric at ({i}, {j})"
                    )));
                }
                raw[j * n + i] = a;
                lo = lo.min(a);
                hi = hi.max(a);
            }
        }
        let threshold_value = if n > 1 { lo + theta * (hi - lo) } else { 0.0 };
        let mut edges = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges[i * n + j] = (raw[i * n + j] - threshold_value).max(0.0);
                }
            }
        }
        Ok(SimilarityGraph {
            cluster_id: cluster_id.into(),
            n,
            raw,
            edges,
            theta,
            alpha,
            threshold_value,
        })
    }

    /// Wraps an already thresholded edge matrix; `raw` equals `edges` and the
    /// threshold is 0.
    pub fn from_edges(cluster_id: impl Into<String>, n: usize, edges: Vec<f64>) -> Result<Self> {
        if edges.iter().any(|&e| e < 0.0) {
            return Err(Error::Config("edge weights must be nonnegative".into()));
        }
        let mut graph = SimilarityGraph::from_raw(cluster_id, n, edges, 1.0, 0.0)?;
        graph.threshold_value = 0.0;
        graph.edges.clone_from(&graph.raw);
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn raw(&self, i: usize, j: usize) -> f64 {
        self.raw[i * self.n + j]
    }

    pub fn edge(&self, i: usize, j: usize) -> f64 {
        self.edges[i * self.n + j]
    }

    pub fn edge_row(&self, i: usize) -> &[f64] {
        &self.edges[i * self.n..(i + 1) * self.n]
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Effective blend weight; 1 when the graph was built without embeddings.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn threshold_value(&self) -> f64 {
        self.threshold_value
    }
}

pub fn build_graph(
    cluster: &DocumentCluster,
    tfidf: &TfidfIndex,
    embeddings: Option<&EmbeddingMatrix>,
    alpha: f64,
    theta: f64,
) -> Result<SimilarityGraph> {
    check_unit("alpha", alpha)?;
    let n = cluster.len();
    if tfidf.len() != n {
        return Err(Error::Config(format!("tf-idf rows {} != sentences {n}", tfidf.len())));
    }
    if let Some(e) = embeddings {
        if e.len() != n {
            return Err(Error::EmbeddingRows {
                cluster: cluster.cluster_id.clone(),
                rows: e.len(),
                sentences: n,
            });
        }
    }
    let alpha = match embeddings {
        Some(_) => alpha,
        None => {
            if alpha < 1.0 {
                log::warn!(
                    "cluster {}: no embeddings, using tf-idf similarity only",
                    cluster.cluster_id
                );
            }
            1.0
        }
    };
    let mut raw = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let pair = embeddings.map(|e| (e.row(i), e.row(j)));
            let s = combined_similarity(tfidf.vector(i), tfidf.vector(j), pair, alpha);
            raw[i * n + j] = s;
            raw[j * n + i] = s;
        }
    }
    SimilarityGraph::from_raw(cluster.cluster_id.clone(), n, raw, alpha, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cluster(sentences: &[&str]) -> DocumentCluster {
        DocumentCluster::from_documents("t", vec![sentences.iter().map(|s| s.to_string()).collect()], vec![])
            .unwrap()
            .0
    }

    #[test]
    fn smooth_idf_values() {
        let c = cluster(&["a b", "a c", "a"]);
        let tfidf = build_tfidf(&c);
        assert_abs_diff_eq!(tfidf.idf("a").unwrap(), 1.0, epsilon = 1e-12);
        // ln(4/2) + 1
        assert_abs_diff_eq!(tfidf.idf("b").unwrap(), 1.693_147_180_559_945, epsilon = 1e-12);
        let v = tfidf.vector(0);
        let norm = (1.0f64 + 1.693_147_180_559_945f64.powi(2)).sqrt();
        assert_abs_diff_eq!(v.weights[0].1, 1.0 / norm, epsilon = 1e-12);
        assert_abs_diff_eq!(v.dot(v), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn tokenless_sentence_has_zero_vector() {
        let c = cluster(&["a b", "!!!"]);
        let tfidf = build_tfidf(&c);
        assert!(tfidf.vector(1).is_zero());
        assert_eq!(tfidf.vector(1).norm, 0.0);
        assert_eq!(tfidf.vector(0).dot(tfidf.vector(1)), 0.0);
    }

    #[test]
    fn combined_similarity_blend() {
        let c = cluster(&["x y", "x y"]);
        let tfidf = build_tfidf(&c);
        let r = [0.6, 0.8];
        let v = tfidf.vector(0);
        for alpha in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(combined_similarity(v, v, Some((&r, &r)), alpha), 1.0, epsilon = 1e-12);
        }
        // blend arithmetic with a known lexical cosine of 0.5
        let a = TfidfVector {
            weights: vec![(0, 1.0)],
            norm: 1.0,
        };
        let b = TfidfVector {
            weights: vec![(0, 0.5), (1, 0.75f64.sqrt())],
            norm: 1.0,
        };
        let (ri, rj) = ([1.0, 0.0], [0.8, 0.6]);
        assert_abs_diff_eq!(
            combined_similarity(&a, &b, Some((&ri, &rj)), 0.9),
            0.53,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(combined_similarity(&a, &b, Some((&ri, &rj)), 1.0), 0.5);
        assert_abs_diff_eq!(combined_similarity(&a, &b, None, 0.2), 0.5);
    }

    fn three_node(values: [f64; 3], theta: f64) -> SimilarityGraph {
        let [a, b, c] = values;
        let raw = vec![0.0, a, b, a, 0.0, c, b, c, 0.0];
        SimilarityGraph::from_raw("g", 3, raw, 1.0, theta).unwrap()
    }

    #[test]
    fn threshold_midpoint() {
        let g = three_node([0.1, 0.5, 0.9], 0.5);
        assert_abs_diff_eq!(g.threshold_value(), 0.5, epsilon = 1e-12);
        assert_eq!(g.edge(0, 1), 0.0);
        assert_eq!(g.edge(0, 2), 0.0);
        assert_abs_diff_eq!(g.edge(1, 2), 0.4, epsilon = 1e-12);
        let g = three_node([0.1, 0.7, 0.9], 0.5);
        assert_abs_diff_eq!(g.edge(0, 2), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn threshold_boundaries() {
        let g = three_node([0.1, 0.5, 0.9], 0.0);
        assert_abs_diff_eq!(g.threshold_value(), 0.1);
        assert_eq!(g.edge(0, 1), 0.0);
        assert!(g.edge(0, 2) > 0.0 && g.edge(1, 2) > 0.0);
        let g = three_node([0.1, 0.5, 0.9], 1.0);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.edge(i, j), 0.0);
            }
        }
    }

    #[test]
    fn single_sentence_graph() {
        let c = cluster(&["only one"]);
        let g = build_graph(&c, &build_tfidf(&c), None, 0.9, 0.1).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge(0, 0), 0.0);
        assert_eq!(g.alpha(), 1.0);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(SimilarityGraph::from_raw("g", 1, vec![0.0], 1.5, 0.0).is_err());
        assert!(SimilarityGraph::from_raw("g", 1, vec![0.0], 0.5, -0.1).is_err());
        assert!(SimilarityGraph::from_raw("g", 2, vec![0.0, 0.1, 0.2, 0.0], 0.5, 0.0).is_err());
    }

    #[test]
    fn embedding_record_validation() {
        let c = cluster(&["a", "b", "c"]);
        let rec = EmbeddingRecord {
            cluster_id: "t".into(),
            dim: 4,
            vectors: vec![vec![2.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0], vec![1.0; 4]],
        };
        let m = EmbeddingMatrix::from_record(rec.clone(), &c).unwrap();
        assert_eq!((m.len(), m.dim), (3, 4));
        assert_eq!(m.row(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_abs_diff_eq!(m.dot(2, 2), 1.0, epsilon = 1e-12);

        let mut short = rec.clone();
        short.vectors.pop();
        let err = EmbeddingMatrix::from_record(short, &c).unwrap_err();
        assert_eq!(err.to_string(), "cluster t: embedding rows 2 != sentences 3");

        let mut ragged = rec.clone();
        ragged.vectors[1].push(0.0);
        assert!(matches!(
            EmbeddingMatrix::from_record(ragged, &c),
            Err(Error::EmbeddingDim { row: 1, found: 5, .. })
        ));

        let mut nan = rec;
        nan.vectors[2][1] = f64::NAN;
        assert!(matches!(
            EmbeddingMatrix::from_record(nan, &c),
            Err(Error::NonFinite { .. })
        ));
    }
}
