use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::tagger::{Mode, Prediction, TimingRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    ZeroShot,
    FewShot,
}

impl Setting {
    pub fn from_shots(shots: usize) -> Self {
        if shots == 0 {
            Setting::ZeroShot
        } else {
            Setting::FewShot
        }
    }
}

/// Total backend wall time per mode and `time(iter) / time(decom)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    pub mode_times_ms: BTreeMap<Mode, f64>,
    pub ratio: f64,
    pub setting: Setting,
    pub sentences: usize,
}

fn ids<'a>(records: impl Iterator<Item = &'a str>) -> BTreeSet<&'a str> {
    records.collect()
}

pub fn speedup_from_timings(
    iter: &[TimingRecord],
    decom: &[TimingRecord],
    setting: Setting,
) -> Result<SpeedupReport, MetricsError> {
    let iter_ids = ids(iter.iter().map(|r| r.sentence_id.as_str()));
    let decom_ids = ids(decom.iter().map(|r| r.sentence_id.as_str()));
    if iter_ids != decom_ids {
        let diff: Vec<&str> = iter_ids
            .symmetric_difference(&decom_ids)
            .take(5)
            .copied()
            .collect();
        return Err(MetricsError::SentenceMismatch(diff.join(", ")));
    }
    if iter.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut mode_times_ms = BTreeMap::new();
    for r in iter.iter().chain(decom) {
        *mode_times_ms.entry(r.mode).or_insert(0.0) += r.wall_time_ms;
    }
    let iter_ms: f64 = iter.iter().map(|r| r.wall_time_ms).sum();
    let decom_ms: f64 = decom.iter().map(|r| r.wall_time_ms).sum();
    if decom_ms <= 0.0 {
        return Err(MetricsError::ZeroTime);
    }
    Ok(SpeedupReport {
        mode_times_ms,
        ratio: iter_ms / decom_ms,
        setting,
        sentences: iter_ids.len(),
    })
}

/// Speedup of decomposed over iterative prompting on the same sentences.
pub fn speedup(
    iter: &[Prediction],
    decom: &[Prediction],
    setting: Setting,
) -> Result<SpeedupReport, MetricsError> {
    let iter: Vec<TimingRecord> = iter.iter().map(TimingRecord::from).collect();
    let decom: Vec<TimingRecord> = decom.iter().map(TimingRecord::from).collect();
    speedup_from_timings(&iter, &decom, setting)
}
