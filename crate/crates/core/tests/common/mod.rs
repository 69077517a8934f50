#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srisum::corpus::{load_clusters, ClusterFormat, DocumentCluster};
use srisum::similarity::SimilarityGraph;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn synthetic_corpus() -> Vec<DocumentCluster> {
    load_clusters(fixture("synthetic_corpus.jsonl"), ClusterFormat::Jsonl).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric edge matrix with a zero diagonal; about a quarter of the pairs
/// are zero.
pub fn random_edges(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = if rng.gen_bool(0.25) { 0.0 } else { rng.gen::<f64>() };
            e[i * n + j] = w;
            e[j * n + i] = w;
        }
    }
    e
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> SimilarityGraph {
    SimilarityGraph::from_edges("rand", n, random_edges(rng, n)).unwrap()
}

/// Symmetric raw similarity matrix in [0, 1] for threshold tests.
pub fn random_raw(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen::<f64>();
            r[i * n + j] = w;
            r[j * n + i] = w;
        }
    }
    r
}

pub fn random_scores(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

pub const LAMBDAS: [f64; 6] = [0.0, 0.0625, 0.25, 0.5, 1.0, 2.0];

/// One random selection instance: graph, external importance, lambda and
/// sentence budget.
pub struct Instance {
    pub graph: SimilarityGraph,
    pub scores: Vec<f64>,
    pub lambda: f64,
    pub budget: usize,
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize, max_budget: usize) -> Instance {
    let n = rng.gen_range(2..=max_n);
    Instance {
        graph: random_graph(rng, n),
        scores: random_scores(rng, n),
        lambda: LAMBDAS[rng.gen_range(0..LAMBDAS.len())],
        budget: rng.gen_range(1..=max_budget.min(n)),
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
