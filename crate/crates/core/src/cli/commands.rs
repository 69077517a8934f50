use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;

use super::config::RunConfig;
use crate::corpus::{load_clusters, ClusterFormat, DocumentCluster};
use crate::error::{Error, Result};
use crate::eval::{evaluate_cluster, EvalReport, RougeConfig, Variant};
use crate::importance::ScoreStore;
use crate::inference::Method;
use crate::jsonl::read_jsonl;
use crate::pipeline::{summarize_cluster, ClusterSummary, SelectionRecord, SummarizeParams};
use crate::similarity::EmbeddingStore;

/// Cluster inputs shared by summarize and sweep.
pub struct Inputs {
    pub clusters: Vec<DocumentCluster>,
    pub embeddings: Option<EmbeddingStore>,
    pub scores: Option<ScoreStore>,
}

impl Inputs {
    pub fn load(config: &RunConfig) -> Result<Self> {
        let clusters = load_clusters(&config.clusters, ClusterFormat::Jsonl)?;
        let embeddings = config.embeddings.as_ref().map(EmbeddingStore::open).transpose()?;
        if embeddings.is_none() {
            log::warn!("no embeddings given, similarity uses TF-IDF only");
        }
        let scores = config.importance.as_ref().map(ScoreStore::open).transpose()?;
        Ok(Inputs {
            clusters,
            embeddings,
            scores,
        })
    }

    fn summarize_one(&self, cluster: &DocumentCluster, params: &SummarizeParams) -> Result<ClusterSummary> {
        let embeddings = self
            .embeddings
            .as_ref()
            .map(|s| s.matrix_for(cluster))
            .transpose()
            .map_err(|e| e.in_cluster(&cluster.cluster_id))?;
        let scores = self
            .scores
            .as_ref()
            .map(|s| s.scores_for(cluster))
            .transpose()
            .map_err(|e| e.in_cluster(&cluster.cluster_id))?;
        summarize_cluster(cluster, params, embeddings.as_ref(), scores)
    }

    /// Summarizes every cluster, results in input order.
    pub fn summarize_all(&self, params: &SummarizeParams, jobs: usize) -> Result<Vec<Result<ClusterSummary>>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(|| {
            self.clusters
                .par_iter()
                .map(|c| self.summarize_one(c, params))
                .collect()
        }))
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// Runs summarization and writes one JSON line per cluster.
pub fn summarize(config: &RunConfig) -> Result<Vec<SelectionRecord>> {
    config.params.validate()?;
    let inputs = Inputs::load(config)?;
    let mut records = Vec::with_capacity(inputs.clusters.len());
    for result in inputs.summarize_all(&config.params, config.jobs)? {
        match result {
            Ok(summary) => records.push(SelectionRecord::new(&summary, config.timing)),
            Err(e) if config.skip_errors && !e.is_config() => log::error!("skipping: {e}"),
            Err(e) => return Err(e),
        }
    }
    let mut out = String::new();
    for r in &records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    write_output(config.output.as_deref(), &out)?;
    Ok(records)
}

pub fn read_selections(path: &Path) -> Result<Vec<SelectionRecord>> {
    read_jsonl(path)
}

/// Pairs each selection with its cluster's references. Ids present on only
/// one side are an error.
pub fn align<'a>(
    selections: &'a [SelectionRecord],
    clusters: &'a [DocumentCluster],
) -> Result<Vec<(&'a SelectionRecord, &'a [String])>> {
    let by_id: HashMap<&str, &DocumentCluster> = clusters.iter().map(|c| (c.cluster_id.as_str(), c)).collect();
    let selected: HashSet<&str> = selections.iter().map(|s| s.id.as_str()).collect();
    let mut orphans: Vec<String> = selections
        .iter()
        .filter(|s| !by_id.contains_key(s.id.as_str()))
        .map(|s| format!("selection {}", s.id))
        .collect();
    orphans.extend(
        clusters
            .iter()
            .filter(|c| !selected.contains(c.cluster_id.as_str()))
            .map(|c| format!("cluster {}", c.cluster_id)),
    );
    if !orphans.is_empty() {
        return Err(Error::Orphans(orphans));
    }
    Ok(selections
        .iter()
        .map(|s| (s, by_id[s.id.as_str()].references.as_slice()))
        .collect())
}

pub fn evaluate_records(pairs: &[(&SelectionRecord, &[String])], config: &RougeConfig) -> EvalReport {
    let missing = pairs.iter().filter(|(_, refs)| refs.is_empty()).count();
    if missing > 0 {
        log::warn!("{missing} clusters have no references, reporting diversity only for them");
    }
    let evals = pairs
        .par_iter()
        .map(|(s, refs)| evaluate_cluster(&s.id, &s.summary_text, refs, config))
        .collect();
    EvalReport::from_clusters(evals)
}

/// Scores a selections file against the references of a clusters file.
pub fn evaluate(selections: &Path, clusters: &Path, config: &RougeConfig) -> Result<EvalReport> {
    config.validate()?;
    let selections = read_selections(selections)?;
    let clusters = load_clusters(clusters, ClusterFormat::Jsonl)?;
    let pairs = align(&selections, &clusters)?;
    Ok(evaluate_records(&pairs, config))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub methods: Vec<Method>,
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
    pub beam_sizes: Vec<usize>,
}

impl SweepGrid {
    /// Grid holding only the values of `params`.
    pub fn single(params: &SummarizeParams) -> Self {
        SweepGrid {
            methods: vec![params.method],
            lambdas: vec![params.lambda],
            alphas: vec![params.alpha],
            thetas: vec![params.theta],
            beam_sizes: vec![params.beam_size],
        }
    }

    /// Parameter points in row order. The beam dimension applies to beam
    /// search only; other methods get one point per remaining combination.
    pub fn points(&self, base: &SummarizeParams) -> Result<Vec<SummarizeParams>> {
        if self.methods.is_empty()
            || self.lambdas.is_empty()
            || self.alphas.is_empty()
            || self.thetas.is_empty()
            || self.beam_sizes.is_empty()
        {
            return Err(Error::Config("every sweep grid must be nonempty".into()));
        }
        let mut points = Vec::new();
        for &method in &self.methods {
            let beams: &[usize] = if method == Method::Beam {
                &self.beam_sizes
            } else {
                &self.beam_sizes[..1]
            };
            for &lambda in &self.lambdas {
                for &alpha in &self.alphas {
                    for &theta in &self.thetas {
                        for &beam_size in beams {
                            let p = SummarizeParams {
                                method,
                                lambda,
                                alpha,
                                theta,
                                beam_size,
                                ..*base
                            };
                            p.validate()?;
                            points.push(p);
                        }
                    }
                }
            }
        }
        Ok(points)
    }
}

pub const SWEEP_HEADER: &str = "method,lambda,alpha,theta,beam_size,clusters,\
r1_f1,r2_f1,rl_f1,rlsum_f1,rsu4_f1,uniq1,uniq2,uniq3,uniq4,runtime_ms";

/// Runs every grid point over all clusters and returns the CSV text.
pub fn sweep(config: &RunConfig, grid: &SweepGrid, rouge: &RougeConfig) -> Result<String> {
    rouge.validate()?;
    let points = grid.points(&config.params)?;
    let inputs = Inputs::load(config)?;
    if inputs.clusters.iter().all(|c| c.references.is_empty()) {
        return Err(Error::Config("sweep needs clusters with references".into()));
    }
    let rouge = RougeConfig {
        variants: Variant::ALL.to_vec(),
        word_limit: rouge.word_limit.or(config.params.budget.word_limit()),
        ..rouge.clone()
    };
    let mut csv = String::from(SWEEP_HEADER);
    csv.push('\n');
    for params in points {
        let mut records = Vec::new();
        for (cluster, result) in inputs.clusters.iter().zip(inputs.summarize_all(&params, config.jobs)?) {
            match result {
                Ok(s) => records.push((SelectionRecord::new(&s, true), cluster.references.as_slice())),
                Err(e) if config.skip_errors && !e.is_config() => log::error!("skipping: {e}"),
                Err(e) => return Err(e),
            }
        }
        let runtime: f64 = records.iter().filter_map(|(r, _)| r.elapsed_ms).sum();
        let pairs: Vec<(&SelectionRecord, &[String])> = records.iter().map(|(r, refs)| (r, *refs)).collect();
        let report = evaluate_records(&pairs, &rouge);
        let beam = if params.method == Method::Beam {
            params.beam_size.to_string()
        } else {
            String::new()
        };
        let _ = write!(
            csv,
            "{},{},{},{},{},{}",
            params.method,
            params.lambda,
            params.alpha,
            params.theta,
            beam,
            records.len()
        );
        for v in Variant::ALL {
            let f1 = report.mean_rouge.as_ref().and_then(|m| m.get(&v)).map(|s| s.f1);
            match f1 {
                Some(f) => {
                    let _ = write!(csv, ",{f:.6}");
                }
                None => csv.push(','),
            }
        }
        for u in report.mean_uniq_ngram_ratio {
            let _ = write!(csv, ",{u:.6}");
        }
        let _ = writeln!(csv, ",{runtime:.3}");
    }
    Ok(csv)
}

pub fn write_text(path: Option<&Path>, content: &str) -> Result<()> {
    write_output(path, content)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_in_row_order() {
        let grid = SweepGrid {
            methods: vec![Method::IndividualGreedy, Method::Beam],
            lambdas: vec![0.1, 0.2],
            alphas: vec![1.0],
            thetas: vec![0.0],
            beam_sizes: vec![2, 4],
        };
        let pts = grid.points(&SummarizeParams::default()).unwrap();
        let keys: Vec<(Method, f64, usize)> = pts.iter().map(|p| (p.method, p.lambda, p.beam_size)).collect();
        assert_eq!(
            keys,
            vec![
                (Method::IndividualGreedy, 0.1, 2),
                (Method::IndividualGreedy, 0.2, 2),
                (Method::Beam, 0.1, 2),
                (Method::Beam, 0.1, 4),
                (Method::Beam, 0.2, 2),
                (Method::Beam, 0.2, 4),
            ]
        );
    }

    #[test]
    fn empty_or_invalid_grid_is_config_error() {
        let mut grid = SweepGrid::single(&SummarizeParams::default());
        grid.thetas.clear();
        assert!(grid.points(&SummarizeParams::default()).unwrap_err().is_config());
        let mut grid = SweepGrid::single(&SummarizeParams::default());
        grid.alphas = vec![2.0];
        assert!(grid.points(&SummarizeParams::default()).unwrap_err().is_config());
    }

    fn record(id: &str) -> SelectionRecord {
        SelectionRecord {
            id: id.into(),
            selected_ids: vec![0],
            summary_text: "x".into(),
            sri_score: 0.0,
            method: Method::Beam,
            elapsed_ms: None,
        }
    }

    #[test]
    fn orphans_in_both_directions() {
        let c = DocumentCluster::from_documents("a", vec![vec!["One.".into()]], vec![])
            .unwrap()
            .0;
        let err = align(&[record("a"), record("b")], std::slice::from_ref(&c)).unwrap_err();
        assert!(matches!(err, Error::Orphans(ref v) if v == &["selection b".to_string()]));
        let err = align(&[], std::slice::from_ref(&c)).unwrap_err();
        assert!(matches!(err, Error::Orphans(ref v) if v == &["cluster a".to_string()]));
        assert_eq!(align(&[record("a")], &[c]).unwrap().len(), 1);
    }

    #[test]
    fn sweep_header_matches_columns() {
        assert_eq!(SWEEP_HEADER.split(',').count(), 16);
    }
}
