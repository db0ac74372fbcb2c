use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use super::output::{csv_text, pretty_json, write_atomic};
use crate::error::{Error, Result};
use crate::metrics::{speedup_from_timings, weighted_f1, MetricsError, Setting, SpeedupReport};
use crate::tagger::{read_predictions, read_timings, PredictionRecord, TimingRecord};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedRow {
    pub language: String,
    pub iter_f1: f64,
    pub decom_f1: f64,
    /// `decom_f1 - iter_f1`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub speedup: SpeedupReport,
    pub rows: Vec<PairedRow>,
}

struct RunDump {
    config: RunConfig,
    languages: BTreeMap<String, (Vec<PredictionRecord>, Vec<TimingRecord>)>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn load_run(dir: &Path) -> Result<RunDump> {
    let config = RunConfig::load(&dir.join("config.toml"))?;
    let mut languages = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let predictions = path.join("predictions.jsonl");
        if !predictions.is_file() {
            continue;
        }
        let timing = path.join("timing.jsonl");
        let p = read_predictions(open(&predictions)?)
            .map_err(|e| Error::Output(format!("{}: {e}", predictions.display())))?;
        let t = read_timings(open(&timing)?)
            .map_err(|e| Error::Output(format!("{}: {e}", timing.display())))?;
        languages.insert(entry.file_name().to_string_lossy().into_owned(), (p, t));
    }
    if languages.is_empty() {
        return Err(Error::Output(format!(
            "{}: no prediction dumps",
            dir.display()
        )));
    }
    Ok(RunDump { config, languages })
}

fn pooled_f1(records: &[PredictionRecord]) -> Result<f64> {
    let mut gold = Vec::new();
    let mut pred = Vec::new();
    for r in records {
        let g = r
            .gold
            .as_ref()
            .ok_or_else(|| MetricsError::MissingGold(r.sentence_id.clone()))?;
        gold.extend_from_slice(g);
        pred.extend_from_slice(&r.predicted);
    }
    Ok(weighted_f1(&gold, &pred)?.weighted_f1)
}

fn ids(records: &[PredictionRecord]) -> BTreeSet<&str> {
    records.iter().map(|r| r.sentence_id.as_str()).collect()
}

/// Timing records keyed by `language/sentence` so ids only need to be unique
/// within a language.
fn qualified(language: &str, records: &[TimingRecord]) -> Vec<TimingRecord> {
    records
        .iter()
        .map(|r| TimingRecord {
            sentence_id: format!("{language}/{}", r.sentence_id),
            ..r.clone()
        })
        .collect()
}

/// Joins two runs over identical sentences: speedup of the decomposed run
/// and per-language F1 differences.
pub fn compare_runs(iter_dir: &Path, decom_dir: &Path) -> Result<Comparison> {
    let iter = load_run(iter_dir)?;
    let decom = load_run(decom_dir)?;
    let iter_langs: BTreeSet<&String> = iter.languages.keys().collect();
    let decom_langs: BTreeSet<&String> = decom.languages.keys().collect();
    if iter_langs != decom_langs {
        let diff: Vec<&str> = iter_langs
            .symmetric_difference(&decom_langs)
            .map(|s| s.as_str())
            .collect();
        return Err(MetricsError::SentenceMismatch(format!(
            "languages present in only one run: {}",
            diff.join(", ")
        ))
        .into());
    }

    let mut rows = Vec::new();
    let mut iter_times = Vec::new();
    let mut decom_times = Vec::new();
    for (language, (ip, it)) in &iter.languages {
        let (dp, dt) = &decom.languages[language];
        if ids(ip) != ids(dp) {
            let a = ids(ip);
            let b = ids(dp);
            let diff: Vec<&str> = a.symmetric_difference(&b).take(5).copied().collect();
            return Err(
                MetricsError::SentenceMismatch(format!("{language}: {}", diff.join(", "))).into(),
            );
        }
        let iter_f1 = pooled_f1(ip)?;
        let decom_f1 = pooled_f1(dp)?;
        rows.push(PairedRow {
            language: language.clone(),
            iter_f1,
            decom_f1,
            delta: decom_f1 - iter_f1,
        });
        iter_times.extend(qualified(language, it));
        decom_times.extend(qualified(language, dt));
    }
    if iter.config.shots != decom.config.shots {
        eprintln!(
            "warning: comparing runs with different shot counts ({} vs {})",
            iter.config.shots, decom.config.shots
        );
    }
    let setting = Setting::from_shots(decom.config.shots);
    let speedup = speedup_from_timings(&iter_times, &decom_times, setting)?;
    Ok(Comparison { speedup, rows })
}

/// Writes `compare.csv` and `speedup.json` into `out`.
pub fn write_comparison(comparison: &Comparison, out: &Path) -> Result<Vec<PathBuf>> {
    let f = |x: f64| format!("{x:.6}");
    let csv = csv_text(
        &["language", "iter_f1", "decom_f1", "delta"],
        comparison
            .rows
            .iter()
            .map(|r| [r.language.clone(), f(r.iter_f1), f(r.decom_f1), f(r.delta)]),
    )?;
    let csv_path = out.join("compare.csv");
    let json_path = out.join("speedup.json");
    write_atomic(&csv_path, csv.as_bytes())?;
    write_atomic(&json_path, pretty_json(&comparison.speedup)?.as_bytes())?;
    Ok(vec![csv_path, json_path])
}
