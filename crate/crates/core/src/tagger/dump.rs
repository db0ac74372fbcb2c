//! Line-delimited JSON dumps. Predictions are deterministic; timings live in
//! a separate sidecar so prediction files stay byte-identical across runs.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{Mode, Prediction};
use crate::corpus::PosTag;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub sentence_id: String,
    pub mode: Mode,
    pub language: String,
    pub tokens: Vec<String>,
    pub gold: Option<Vec<PosTag>>,
    pub predicted: Vec<PosTag>,
    pub request_count: usize,
    pub extraction_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub sentence_id: String,
    pub mode: Mode,
    pub language: String,
    pub wall_time_ms: f64,
}

impl From<&Prediction> for PredictionRecord {
    fn from(p: &Prediction) -> Self {
        PredictionRecord {
            sentence_id: p.sentence_id.clone(),
            mode: p.mode,
            language: p.language.clone(),
            tokens: p.tokens.clone(),
            gold: p.gold.clone(),
            predicted: p.predicted.clone(),
            request_count: p.request_count,
            extraction_failures: p.extraction_failures,
        }
    }
}

impl From<&Prediction> for TimingRecord {
    fn from(p: &Prediction) -> Self {
        TimingRecord {
            sentence_id: p.sentence_id.clone(),
            mode: p.mode,
            language: p.language.clone(),
            wall_time_ms: p.wall_time.as_secs_f64() * 1e3,
        }
    }
}

fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(reader: R) -> Result<Vec<T>, String> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| format!("line {}: {e}", i + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| format!("line {}: {e}", i + 1))?);
    }
    Ok(out)
}

pub fn read_predictions<R: BufRead>(reader: R) -> Result<Vec<PredictionRecord>, String> {
    read_jsonl(reader)
}

pub fn read_timings<R: BufRead>(reader: R) -> Result<Vec<TimingRecord>, String> {
    read_jsonl(reader)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_json_shape() {
        let r = PredictionRecord {
            sentence_id: "de-001".into(),
            mode: Mode::DecomProb,
            language: "de".into(),
            tokens: vec!["Viel".into()],
            gold: Some(vec![PosTag::Adj]),
            predicted: vec![PosTag::Adj],
            request_count: 1,
            extraction_failures: 0,
        };
        let line = serde_json::to_string(&r).unwrap();
        assert_eq!(
            line,
            r#"{"sentence_id":"de-001","mode":"decom_prob","language":"de","tokens":["Viel"],"gold":["ADJ"],"predicted":["ADJ"],"request_count":1,"extraction_failures":0}"#
        );
        let back = read_predictions(format!("{line}\n\n").as_bytes()).unwrap();
        assert_eq!(back, vec![r]);
        assert!(read_predictions("{oops".as_bytes()).is_err());
    }
}
