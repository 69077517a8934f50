//! Command line interface: `summarize`, `evaluate` and `sweep`.
//!
//! Exit status is 0 on success, 1 for input errors and 2 for configuration
//! errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::eval::{MultiRef, RougeConfig, Variant};
use crate::inference::Method;
use crate::pipeline::Preset;

pub use commands::{
    align, evaluate, evaluate_records, read_selections, summarize, sweep, Inputs, SweepGrid, SWEEP_HEADER,
};
pub use config::{resolve_params, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "srisum", version, about = "Extractive multi-document summarization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select summary sentences for every cluster.
    Summarize(SummarizeArgs),
    /// Score selections against references.
    Evaluate(EvaluateArgs),
    /// Run a parameter grid and report mean scores as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    IndividualGreedy,
    HolisticGreedy,
    Beam,
    Exhaustive,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::IndividualGreedy => Method::IndividualGreedy,
            MethodArg::HolisticGreedy => Method::HolisticGreedy,
            MethodArg::Beam => Method::Beam,
            MethodArg::Exhaustive => Method::Exhaustive,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Duc,
    Tac,
    Multinews,
    Wikisum,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Duc => Preset::Duc,
            PresetArg::Tac => Preset::Tac,
            PresetArg::Multinews => Preset::Multinews,
            PresetArg::Wikisum => Preset::Wikisum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MultiRefArg {
    Max,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Table,
}

/// Inputs and model settings shared by summarize and sweep.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Cluster file, one JSON object per line.
    #[arg(long)]
    pub clusters: PathBuf,
    /// Sentence embedding file.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Sentence importance score file; replaces graph centrality.
    #[arg(long)]
    pub importance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// TOML file with parameter overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Candidates kept by the exhaustive search prefilter.
    #[arg(long)]
    pub prefilter: Option<usize>,
    /// Summary length in sentences.
    #[arg(long, conflicts_with = "word_limit")]
    pub sentences: Option<usize>,
    /// Summary length in words.
    #[arg(long)]
    pub word_limit: Option<usize>,
    /// Largest number of subsets an exact search may score.
    #[arg(long)]
    pub safety_cap: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Log and skip clusters that fail instead of aborting.
    #[arg(long)]
    pub skip_errors: bool,
}

impl InputArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            preset: self.preset.map(Into::into),
            alpha: self.alpha,
            theta: self.theta,
            lambda: self.lambda,
            prefilter_size: self.prefilter,
            sentences: self.sentences,
            word_limit: self.word_limit,
            safety_cap: self.safety_cap,
            ..Overrides::default()
        }
    }

    fn run_config(&self, flags: Overrides, output: Option<PathBuf>) -> Result<RunConfig> {
        if self.jobs == 0 {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        let params = resolve_params(&flags, self.config.as_deref())?;
        Ok(RunConfig {
            params,
            clusters: self.clusters.clone(),
            embeddings: self.embeddings.clone(),
            importance: self.importance.clone(),
            output,
            jobs: self.jobs,
            skip_errors: self.skip_errors,
            timing: true,
        })
    }
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub beam_size: Option<usize>,
    /// Record per-step search traces.
    #[arg(long)]
    pub trace: bool,
    /// Write `elapsed_ms: null` so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RougeArgs {
    /// ROUGE variants to compute.
    #[arg(long, value_delimiter = ',', default_value = "r1,r2,rl,rlsum,rsu4")]
    pub variants: Vec<String>,
    /// Disable Porter stemming.
    #[arg(long)]
    pub no_stem: bool,
    /// Truncate candidates to this many words before scoring.
    #[arg(long = "rouge-word-limit")]
    pub rouge_word_limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = MultiRefArg::Max)]
    pub multi_ref: MultiRefArg,
}

impl RougeArgs {
    fn config(&self) -> Result<RougeConfig> {
        let variants = self
            .variants
            .iter()
            .map(|v| v.trim().parse::<Variant>())
            .collect::<Result<Vec<_>>>()?;
        let cfg = RougeConfig {
            variants,
            stemming: !self.no_stem,
            word_limit: self.rouge_word_limit,
            multi_ref: match self.multi_ref {
                MultiRefArg::Max => MultiRef::Max,
                MultiRefArg::Average => MultiRef::Average,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Selections file written by `summarize`.
    #[arg(long)]
    pub selections: PathBuf,
    /// Cluster file holding the references.
    #[arg(long)]
    pub clusters: PathBuf,
    #[command(flatten)]
    pub rouge: RougeArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write per-cluster unique n-gram ratios as CSV.
    #[arg(long)]
    pub diversity_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "beam")]
    pub methods: Vec<MethodArg>,
    /// Comma-separated values; the resolved value when absent.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub thetas: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub beam_sizes: Vec<usize>,
    #[command(flatten)]
    pub rouge: RougeArgs,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn or_default<T: Copy>(values: &[T], default: T) -> Vec<T> {
    if values.is_empty() {
        vec![default]
    } else {
        values.to_vec()
    }
}

pub fn run_summarize(args: &SummarizeArgs) -> Result<()> {
    let flags = Overrides {
        method: args.method.map(Into::into),
        beam_size: args.beam_size,
        trace: args.trace.then_some(true),
        ..args.input.overrides()
    };
    let mut config = args.input.run_config(flags, args.output.clone())?;
    config.timing = !args.no_timing;
    summarize(&config)?;
    Ok(())
}

pub fn run_evaluate(args: &EvaluateArgs) -> Result<()> {
    let rouge = args.rouge.config()?;
    let report = evaluate(&args.selections, &args.clusters, &rouge)?;
    let mut text = match args.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Table => report.to_table(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    commands::write_text(args.output.as_deref(), &text)?;
    if let Some(path) = &args.diversity_csv {
        commands::write_text(Some(path), &report.diversity_csv())?;
    }
    Ok(())
}

pub fn run_sweep(args: &SweepArgs) -> Result<()> {
    let config = args.input.run_config(args.input.overrides(), args.output.clone())?;
    let p = &config.params;
    let grid = SweepGrid {
        methods: args.methods.iter().map(|&m| m.into()).collect(),
        lambdas: or_default(&args.lambdas, p.lambda),
        alphas: or_default(&args.alphas, p.alpha),
        thetas: or_default(&args.thetas, p.theta),
        beam_sizes: or_default(&args.beam_sizes, p.beam_size),
    };
    let csv = sweep(&config, &grid, &args.rouge.config()?)?;
    commands::write_text(config.output.as_deref(), &csv)
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Summarize(a) => run_summarize(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Sweep(a) => run_sweep(a),
    }
}

/// Exit code for an error: 2 for configuration, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_config() {
        2
    } else {
        1
    }
}

/// Binary entry point.
pub fn run() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
