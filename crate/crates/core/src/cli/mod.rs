//! Command-line orchestration: evaluation runs, k-shot ablation, typology
//! similarity, run comparison and grouped reports.

mod compare;
mod config;
mod evaluate;
mod output;
mod typology;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use compare::{compare_runs, write_comparison, Comparison, PairedRow};
pub use config::{DecodeMode, Method, RunConfig};
pub use evaluate::{
    ablate, evaluate, evaluate_with, parse_k_list, AblationMatrix, LanguageOutcome, RunSummary,
    RESULTS_HEADER,
};
pub use output::write_atomic;
pub use typology::{
    group_runs, read_results, similarity_csv, similarity_rows, write_group_report, BUNDLED_META,
    BUNDLED_VECTORS,
};

use crate::backend::BackendKind;
use crate::corpus::ABLATION_LANGUAGES;
use crate::error::Result;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("config file: {0}")]
    Parse(String),
    #[error("cannot read config file {0}")]
    Read(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "seqprobe",
    version,
    about = "Decomposed vs iterative prompting for POS tagging"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tag sampled sentences of each language and score them.
    Evaluate(RunArgs),
    /// Repeat an evaluation for several shot counts.
    Ablate(AblateArgs),
    /// Typological similarity of each evaluation language to English.
    Similarity(SimilarityArgs),
    /// Speedup and paired F1 of an iterative run against a decomposed run.
    Compare(CompareArgs),
    /// Group zero- and few-shot results by family, script and corpus share.
    Group(GroupArgs),
}

fn parse_backend(s: &str) -> std::result::Result<BackendKind, String> {
    match s {
        "mock" => Ok(BackendKind::Mock),
        "http" => Ok(BackendKind::Http),
        other => Err(format!("unknown backend `{other}` (expected mock or http)")),
    }
}

/// Run settings. Every flag overrides the matching field of `--config`.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML file with the same fields as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub mode: Option<DecodeMode>,
    #[arg(long)]
    pub shots: Option<usize>,
    /// Prepend the tag-set instruction.
    #[arg(long, conflicts_with = "no_instruction")]
    pub instruction: bool,
    #[arg(long)]
    pub no_instruction: bool,
    /// Comma-separated ISO 639-1 codes.
    #[arg(long, value_delimiter = ',')]
    pub languages: Option<Vec<String>>,
    #[arg(long)]
    pub sample_size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory of `<language>.conllu` test files.
    #[arg(long)]
    pub corpus_dir: Option<PathBuf>,
    /// English training file for demonstrations.
    #[arg(long)]
    pub demos: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_parser = parse_backend)]
    pub backend: Option<BackendKind>,
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub max_concurrency: Option<usize>,
    #[arg(long)]
    pub timeout_ms: Option<u64>,
    #[arg(long)]
    pub retry: Option<u32>,
    /// Environment variable holding the API bearer token.
    #[arg(long)]
    pub api_key_env: Option<String>,
    #[arg(long)]
    pub mock_table: Option<PathBuf>,
    #[arg(long)]
    pub mock_latency_ms: Option<u64>,
}

impl RunArgs {
    /// File values (or defaults) with flags applied on top. Also reports
    /// whether the language list came from the user.
    pub fn resolve(&self) -> Result<(RunConfig, bool), ConfigError> {
        let (mut c, file_languages) = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
                let table: toml::Table =
                    toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
                (
                    RunConfig::from_toml(&text)?,
                    table.contains_key("languages"),
                )
            }
            None => (RunConfig::default(), false),
        };
        macro_rules! set {
            ($($flag:ident => $($field:ident).+),* $(,)?) => {
                $(if let Some(v) = &self.$flag { c.$($field).+ = v.clone(); })*
            };
        }
        set!(
            method => method,
            shots => shots,
            languages => languages,
            sample_size => sample_size,
            seed => seed,
            corpus_dir => corpus_dir,
            demos => demos,
            output => output,
            backend => backend.kind,
            endpoint => backend.endpoint,
            model => backend.model_name,
            max_concurrency => backend.max_concurrency,
            timeout_ms => backend.timeout_ms,
            retry => backend.retry,
            mock_latency_ms => backend.mock_latency_ms,
        );
        if let Some(mode) = self.mode {
            c.mode = Some(mode);
        }
        if self.instruction {
            c.with_instruction = Some(true);
        }
        if self.no_instruction {
            c.with_instruction = Some(false);
        }
        if let Some(env) = &self.api_key_env {
            c.backend.api_key_env = Some(env.clone());
        }
        if let Some(table) = &self.mock_table {
            c.backend.mock_table = Some(table.clone());
        }
        Ok((c, file_languages || self.languages.is_some()))
    }
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated shot counts.
    #[arg(long, default_value = "0,1,3,5,7,9,11,13,15,17")]
    pub k: String,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Vector file; the bundled vectors when omitted.
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// Also write `similarity.csv` into this directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Run directory of the iterative baseline.
    #[arg(long)]
    pub iter: PathBuf,
    /// Run directory of the decomposed run.
    #[arg(long)]
    pub decom: PathBuf,
    #[arg(long, default_value = "out/compare")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Zero-shot run directory (holding results.csv).
    #[arg(long)]
    pub zero: PathBuf,
    /// Few-shot run directory.
    #[arg(long)]
    pub few: PathBuf,
    /// Language metadata TSV; the bundled table when omitted.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    #[arg(long, default_value = "out/groups")]
    pub output: PathBuf,
}

fn print_summary(summary: &RunSummary) {
    println!("{}", summary.run_dir.display());
    for o in &summary.outcomes {
        match (&o.error, o.weighted_f1) {
            (None, Some(f1)) => println!(
                "  {:<4} f1 {:.4}  sentences {}  tokens {}",
                o.language, f1, o.sentences, o.tokens
            ),
            (err, _) => println!(
                "  {:<4} FAILED {}",
                o.language,
                err.as_deref().unwrap_or("")
            ),
        }
    }
    if let Some(agg) = &summary.aggregate {
        if let Some(m) = agg.mult {
            println!("  mult. {m:.4}");
        }
    }
}

fn results_path(dir: &Path) -> PathBuf {
    dir.join("results.csv")
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Evaluate(args) => {
            let (config, _) = args.resolve()?;
            let summary = evaluate(&config)?;
            print_summary(&summary);
            Ok(summary.exit_code())
        }
        Command::Ablate(args) => {
            let (mut config, user_languages) = args.run.resolve()?;
            if !user_languages {
                config.languages = ABLATION_LANGUAGES.iter().map(|s| s.to_string()).collect();
            }
            let ks = parse_k_list(&args.k)?;
            let matrix = ablate(&config, &ks)?;
            print!("{}", matrix.to_csv()?);
            Ok(if matrix.failed { 1 } else { 0 })
        }
        Command::Similarity(args) => {
            let rows = similarity_rows(args.vectors.as_deref())?;
            let csv = similarity_csv(&rows)?;
            if let Some(out) = &args.output {
                write_atomic(&out.join("similarity.csv"), csv.as_bytes())?;
            }
            print!("{csv}");
            Ok(0)
        }
        Command::Compare(args) => {
            let comparison = compare_runs(&args.iter, &args.decom)?;
            write_comparison(&comparison, &args.output)?;
            println!(
                "speedup {:.2}x over {} sentences",
                comparison.speedup.ratio, comparison.speedup.sentences
            );
            for r in &comparison.rows {
                println!(
                    "  {:<4} iter {:.4}  decom {:.4}  delta {:+.4}",
                    r.language, r.iter_f1, r.decom_f1, r.delta
                );
            }
            Ok(0)
        }
        Command::Group(args) => {
            let zero = read_results(&results_path(&args.zero))?;
            let few = read_results(&results_path(&args.few))?;
            let report = group_runs(&zero, &few, args.meta.as_deref(), args.vectors.as_deref())?;
            write_group_report(&report, &args.output)?;
            for (group, setting) in report.empty_groups() {
                println!("empty group: {group} ({setting:?})");
            }
            println!("{}", args.output.display());
            Ok(0)
        }
    }
}
