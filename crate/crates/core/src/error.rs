use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cluster {0} has no sentences")]
    EmptyCluster(String),

    #[error("cluster {cluster}: embedding rows {rows} != sentences {sentences}")]
    EmbeddingRows {
        cluster: String,
        rows: usize,
        sentences: usize,
    },

    #[error("cluster {cluster}: embedding row {row} has {found} values, expected dim {dim}")]
    EmbeddingDim {
        cluster: String,
        row: usize,
        found: usize,
        dim: usize,
    },

    #[error("cluster {cluster}: importance scores {scores} != sentences {sentences}")]
    ScoreCount {
        cluster: String,
        scores: usize,
        sentences: usize,
    },

    #[error("cluster {cluster}: {what}")]
    NonFinite { cluster: String, what: String },

    #[error("cluster {cluster}: no entry in {path}")]
    MissingCluster { cluster: String, path: PathBuf },

    #[error("sentence id {id} out of range for {n} sentences")]
    OutOfRange { id: usize, n: usize },

    #[error("search space of {subsets} subsets exceeds cap {cap}; use a smaller prefilter size")]
    SearchSpace { subsets: u128, cap: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("ids without a counterpart: {0:?}")]
    Orphans(Vec<String>),

    #[error("cluster {cluster}: {source}")]
    InCluster {
        cluster: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_cluster(self, cluster: &str) -> Self {
        match self {
            // already carries the id
            e @ (Error::InCluster { .. }
            | Error::EmptyCluster(_)
            | Error::EmbeddingRows { .. }
            | Error::EmbeddingDim { .. }
            | Error::ScoreCount { .. }
            | Error::NonFinite { .. }
            | Error::MissingCluster { .. }) => e,
            other => Error::InCluster {
                cluster: cluster.to_string(),
                source: Box::new(other),
            },
        }
    }

    /// True for errors caused by the run configuration rather than the input data.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::SearchSpace { .. } => true,
            Error::InCluster { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
