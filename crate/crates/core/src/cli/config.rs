//! Run configuration. Values come from, in decreasing precedence: command
//! line flags, a TOML config file, a dataset preset, built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::inference::{Budget, Method};
use crate::pipeline::{Preset, SummarizeParams};

/// Optional overrides, as read from a config file or flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub method: Option<Method>,
    pub beam_size: Option<usize>,
    pub prefilter_size: Option<usize>,
    pub sentences: Option<usize>,
    pub word_limit: Option<usize>,
    pub safety_cap: Option<u64>,
    pub trace: Option<bool>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn check_budget(&self) -> Result<()> {
        if self.sentences.is_some() && self.word_limit.is_some() {
            return Err(Error::Config("sentences and word_limit are mutually exclusive".into()));
        }
        Ok(())
    }

    fn apply(&self, params: &mut SummarizeParams) {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    params.$field = v;
                }
            )*};
        }
        set!(
            alpha,
            theta,
            lambda,
            method,
            beam_size,
            prefilter_size,
            safety_cap,
            trace
        );
        if let Some(n) = self.sentences {
            params.budget = Budget::Sentences(n);
        }
        if let Some(w) = self.word_limit {
            params.budget = Budget::Words(w);
        }
    }
}

/// Resolves summarization parameters from flags and an optional config file.
pub fn resolve_params(flags: &Overrides, config_file: Option<&Path>) -> Result<SummarizeParams> {
    flags.check_budget()?;
    let file = match config_file {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    file.check_budget()?;
    let preset = flags.preset.or(file.preset);
    let mut params = preset.map(Preset::params).unwrap_or_default();
    file.apply(&mut params);
    flags.apply(&mut params);
    params.validate()?;
    Ok(params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SummarizeParams,
    pub clusters: PathBuf,
    pub embeddings: Option<PathBuf>,
    pub importance: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub jobs: usize,
    pub skip_errors: bool,
    /// Include per-cluster wall-clock time in the output.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(clusters: impl Into<PathBuf>, params: SummarizeParams) -> Self {
        RunConfig {
            params,
            clusters: clusters.into(),
            embeddings: None,
            importance: None,
            output: None,
            jobs: 1,
            skip_errors: false,
            timing: true,
        }
    }
}
