use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::{Method, RunConfig};
use super::output::{csv_text, jsonl, pretty_json, write_atomic};
use super::ConfigError;
use crate::backend::CompletionBackend;
use crate::corpus::{
    read_conllu_file, sample_instances, tagset_line, UposPolicy, SAMPLER_ALGORITHM,
};
use crate::error::Result;
use crate::exec::Executor;
use crate::metrics::{aggregate, Aggregate, EvalReport};
use crate::prompt::{
    build_demonstrations, select_fewshot_examples, select_iterative_demos, DEFAULT_DEMO_ORDER,
};
use crate::tagger::{Prediction, PredictionRecord, Strategy, Tagger, TimingRecord};
use crate::PosTag;

/// Result of one language within a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageOutcome {
    pub language: String,
    pub sentences: usize,
    pub failed_sentences: usize,
    pub tokens: usize,
    pub requests: usize,
    pub extraction_failures: usize,
    pub weighted_f1: Option<f64>,
    pub accuracy: Option<f64>,
    /// Set when the language produced no evaluable prediction at all.
    pub error: Option<String>,
}

impl LanguageOutcome {
    fn failed(language: &str, error: String) -> Self {
        LanguageOutcome {
            language: language.to_string(),
            sentences: 0,
            failed_sentences: 0,
            tokens: 0,
            requests: 0,
            extraction_failures: 0,
            weighted_f1: None,
            accuracy: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub run_dir: PathBuf,
    pub outcomes: Vec<LanguageOutcome>,
    pub aggregate: Option<Aggregate>,
}

impl RunSummary {
    pub fn failed_languages(&self) -> Vec<&str> {
        self.outcomes
            .iter()
            .filter(|o| o.error.is_some())
            .map(|o| o.language.as_str())
            .collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed_languages().is_empty() {
            0
        } else {
            1
        }
    }
}

#[derive(Serialize)]
struct RunMeta<'a> {
    version: &'a str,
    started_unix_ms: u128,
    elapsed_ms: f64,
    sampler: &'a str,
    executor_threads: usize,
    parallel: bool,
    backend_wall_ms: BTreeMap<&'a str, f64>,
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

/// Demonstration prefix for decomposed prompting, or demo sentences for the
/// iterative baseline.
enum Prefix {
    Decom(String),
    Iter(Vec<crate::Sentence>, Option<String>),
}

fn build_prefix(config: &RunConfig, tagger: &Tagger<'_>) -> Result<Prefix> {
    let instruction = config.with_instruction().then(tagset_line);
    let train = if config.shots > 0 {
        read_conllu_file(&config.demos, "en", UposPolicy::AllowMissing)?
    } else {
        Vec::new()
    };
    Ok(match config.method {
        Method::Decom => {
            let order: &[PosTag] = &DEFAULT_DEMO_ORDER[..config.shots];
            let triples = select_fewshot_examples(&train, config.seed, order)?;
            Prefix::Decom(build_demonstrations(
                tagger.template(),
                &triples,
                instruction.as_deref(),
            )?)
        }
        Method::Iter => Prefix::Iter(
            select_iterative_demos(&train, config.shots, config.seed)?,
            instruction,
        ),
    })
}

fn evaluate_language(
    config: &RunConfig,
    tagger: &Tagger<'_>,
    strategy: &Strategy<'_>,
    language: &str,
    lang_dir: &Path,
) -> Result<(LanguageOutcome, Option<EvalReport>, f64)> {
    let path = config.corpus_dir.join(format!("{language}.conllu"));
    let corpus = read_conllu_file(&path, language, UposPolicy::Strict)?;
    let sample = sample_instances(&corpus, config.sample_size, config.seed);

    let mut predictions: Vec<Prediction> = Vec::with_capacity(sample.len());
    let mut failed = 0;
    for sentence in &sample {
        match tagger.tag(sentence, strategy) {
            Ok(p) => predictions.push(p),
            Err(e) => {
                eprintln!("warning: {language}: {e}");
                failed += 1;
            }
        }
    }
    if predictions.is_empty() {
        let reason = if sample.is_empty() {
            format!("{}: no sentences", path.display())
        } else {
            format!("all {} sentences failed", sample.len())
        };
        return Ok((LanguageOutcome::failed(language, reason), None, 0.0));
    }

    let report = EvalReport::from_predictions(language, &predictions)?;
    let records = predictions.iter().map(PredictionRecord::from);
    let timings: Vec<TimingRecord> = predictions.iter().map(TimingRecord::from).collect();
    let backend_ms = timings.iter().map(|t| t.wall_time_ms).sum();

    write_atomic(
        &lang_dir.join("predictions.jsonl"),
        jsonl(records)?.as_bytes(),
    )?;
    write_atomic(&lang_dir.join("timing.jsonl"), jsonl(&timings)?.as_bytes())?;
    write_atomic(
        &lang_dir.join("report.json"),
        pretty_json(&report)?.as_bytes(),
    )?;
    let per_tag = csv_text(
        &["tag", "precision", "recall", "f1", "support"],
        report.per_tag.iter().map(|(tag, m)| {
            [
                tag.as_str().to_string(),
                f6(m.precision),
                f6(m.recall),
                f6(m.f1),
                m.support.to_string(),
            ]
        }),
    )?;
    write_atomic(&lang_dir.join("per_tag.csv"), per_tag.as_bytes())?;

    let outcome = LanguageOutcome {
        language: language.to_string(),
        sentences: predictions.len(),
        failed_sentences: failed,
        tokens: report.n_tokens,
        requests: predictions.iter().map(|p| p.request_count).sum(),
        extraction_failures: predictions.iter().map(|p| p.extraction_failures).sum(),
        weighted_f1: Some(report.weighted_f1),
        accuracy: Some(report.accuracy),
        error: None,
    };
    Ok((outcome, Some(report), backend_ms))
}

pub const RESULTS_HEADER: [&str; 9] = [
    "language",
    "sentences",
    "failed_sentences",
    "tokens",
    "requests",
    "extraction_failures",
    "weighted_f1",
    "accuracy",
    "status",
];

fn results_csv(outcomes: &[LanguageOutcome]) -> Result<String> {
    let opt = |x: Option<f64>| x.map(f6).unwrap_or_default();
    csv_text(
        &RESULTS_HEADER,
        outcomes.iter().map(|o| {
            [
                o.language.clone(),
                o.sentences.to_string(),
                o.failed_sentences.to_string(),
                o.tokens.to_string(),
                o.requests.to_string(),
                o.extraction_failures.to_string(),
                opt(o.weighted_f1),
                opt(o.accuracy),
                o.error.clone().unwrap_or_else(|| "ok".to_string()),
            ]
        }),
    )
}

/// Runs the configured method over every language with the backend the
/// configuration describes.
pub fn evaluate(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let backend = config
        .backend
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    evaluate_with(config, backend.as_ref())
}

/// Like [`evaluate`] with an externally supplied backend.
pub fn evaluate_with(config: &RunConfig, backend: &dyn CompletionBackend) -> Result<RunSummary> {
    config.validate()?;
    let started_wall = SystemTime::now();
    let started = Instant::now();
    let exec = Executor::with_threads(config.backend.max_concurrency)?;
    let tagger = Tagger::new(backend, &exec);
    let prefix = build_prefix(config, &tagger)?;
    let strategy = match &prefix {
        Prefix::Decom(p) if config.tagger_mode() == crate::tagger::Mode::DecomProb => {
            Strategy::DecomProb { prefix: p }
        }
        Prefix::Decom(p) => Strategy::DecomGen { prefix: p },
        Prefix::Iter(demos, instruction) => Strategy::Iter {
            demos,
            instruction: instruction.as_deref(),
        },
    };

    let run_dir = config.run_dir();
    let mut outcomes = Vec::with_capacity(config.languages.len());
    let mut reports = Vec::new();
    let mut backend_wall_ms = BTreeMap::new();
    for language in &config.languages {
        let lang_dir = run_dir.join(language);
        match evaluate_language(config, &tagger, &strategy, language, &lang_dir) {
            Ok((outcome, report, ms)) => {
                backend_wall_ms.insert(language.as_str(), ms);
                outcomes.push(outcome);
                reports.extend(report);
            }
            Err(e) => {
                eprintln!("error: {language}: {e}");
                outcomes.push(LanguageOutcome::failed(language, e.to_string()));
            }
        }
    }

    let aggregate = aggregate(&reports).ok();

    write_atomic(
        &run_dir.join("results.csv"),
        results_csv(&outcomes)?.as_bytes(),
    )?;
    write_atomic(
        &run_dir.join("summary.json"),
        pretty_json(&aggregate)?.as_bytes(),
    )?;
    write_atomic(&run_dir.join("config.toml"), config.to_toml().as_bytes())?;
    let meta = RunMeta {
        version: env!("CARGO_PKG_VERSION"),
        started_unix_ms: started_wall
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        sampler: SAMPLER_ALGORITHM,
        executor_threads: exec.threads(),
        parallel: exec.is_parallel(),
        backend_wall_ms,
    };
    write_atomic(
        &run_dir.join("run_meta.json"),
        pretty_json(&meta)?.as_bytes(),
    )?;

    Ok(RunSummary {
        run_dir,
        outcomes,
        aggregate,
    })
}

/// `k × language` weighted-F1 matrix of an ablation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationMatrix {
    pub languages: Vec<String>,
    /// One row per k: F1 per language (`None` for failed languages).
    pub rows: Vec<(usize, Vec<Option<f64>>)>,
    pub failed: bool,
}

impl AblationMatrix {
    pub fn to_csv(&self) -> Result<String> {
        let mut header = vec!["k"];
        header.extend(self.languages.iter().map(String::as_str));
        csv_text(
            &header,
            self.rows.iter().map(|(k, values)| {
                std::iter::once(k.to_string())
                    .chain(values.iter().map(|v| v.map(f6).unwrap_or_default()))
                    .collect::<Vec<_>>()
            }),
        )
    }
}

pub fn parse_k_list(text: &str) -> Result<Vec<usize>, ConfigError> {
    let ks = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| ConfigError::Invalid(format!("invalid shot count `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ks.is_empty() {
        return Err(ConfigError::Invalid("empty k list".into()));
    }
    Ok(ks)
}

/// One evaluation per shot count; writes `ablation_<method>_<mode>.csv`.
pub fn ablate(base: &RunConfig, ks: &[usize]) -> Result<AblationMatrix> {
    if ks.is_empty() {
        return Err(ConfigError::Invalid("empty k list".into()).into());
    }
    let configs: Vec<RunConfig> = ks
        .iter()
        .map(|&k| RunConfig {
            shots: k,
            ..base.clone()
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let backend = base
        .backend
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut rows = Vec::with_capacity(ks.len());
    let mut failed = false;
    for c in &configs {
        let summary = evaluate_with(c, backend.as_ref())?;
        failed |= summary.exit_code() != 0;
        rows.push((
            c.shots,
            summary.outcomes.iter().map(|o| o.weighted_f1).collect(),
        ));
    }
    let matrix = AblationMatrix {
        languages: base.languages.clone(),
        rows,
        failed,
    };
    let name = format!("ablation_{}_{}.csv", base.method, base.mode());
    write_atomic(&base.output.join(name), matrix.to_csv()?.as_bytes())?;
    Ok(matrix)
}
