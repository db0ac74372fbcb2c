use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::corpus::{LanguageMeta, LanguageTable, ShareClass};
use crate::metrics::Setting;

/// Weighted F1 of one language in both settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageResult {
    pub code: String,
    pub zero_shot: f64,
    pub few_shot: f64,
}

impl LanguageResult {
    pub fn gain(&self) -> f64 {
        self.few_shot - self.zero_shot
    }

    fn value(&self, setting: Setting) -> f64 {
        match setting {
            Setting::ZeroShot => self.zero_shot,
            Setting::FewShot => self.few_shot,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub group: String,
    pub setting: Setting,
    /// `(code, f1)` for every member, sorted by code.
    pub values: Vec<(String, f64)>,
    pub mean: Option<f64>,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub code: String,
    /// `None` for languages without a similarity row (English).
    pub rank_score: Option<f64>,
    pub zero_shot: f64,
    pub few_shot: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedReport {
    /// IE / non-IE, each in both settings.
    pub family: Vec<GroupStats>,
    /// Script known/unknown crossed with corpus share H/L, each in both settings.
    pub script_share: Vec<GroupStats>,
    pub scatter: Vec<ScatterPoint>,
}

impl GroupedReport {
    pub fn empty_groups(&self) -> Vec<(&str, Setting)> {
        self.family
            .iter()
            .chain(&self.script_share)
            .filter(|g| g.empty)
            .map(|g| (g.group.as_str(), g.setting))
            .collect()
    }
}

const SETTINGS: [Setting; 2] = [Setting::FewShot, Setting::ZeroShot];

fn stats(
    group: &str,
    setting: Setting,
    members: &[(&LanguageResult, &LanguageMeta)],
    keep: impl Fn(&LanguageMeta) -> bool,
) -> GroupStats {
    let values: Vec<(String, f64)> = members
        .iter()
        .filter(|(_, m)| keep(m))
        .map(|(r, _)| (r.code.clone(), r.value(setting)))
        .collect();
    let mean = if values.is_empty() {
        None
    } else {
        Some(values.iter().map(|(_, v)| v).sum::<f64>() / values.len() as f64)
    };
    GroupStats {
        group: group.to_string(),
        setting,
        empty: values.is_empty(),
        values,
        mean,
    }
}

/// Groups per-language results by family and by script/corpus share, and
/// pairs each language's few-shot gain with its rank score. `rank_scores`
/// is keyed by the same codes as `results`.
pub fn group_report(
    results: &[LanguageResult],
    meta: &LanguageTable,
    rank_scores: &BTreeMap<String, f64>,
) -> Result<GroupedReport, AnalysisError> {
    let mut sorted: Vec<&LanguageResult> = results.iter().collect();
    sorted.sort_by(|a, b| a.code.cmp(&b.code));

    let missing: Vec<&str> = sorted
        .iter()
        .filter(|r| meta.get(&r.code).is_err())
        .map(|r| r.code.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(AnalysisError::MissingMeta(missing.join(", ")));
    }
    let members: Vec<(&LanguageResult, &LanguageMeta)> = sorted
        .iter()
        .map(|r| (*r, meta.get(&r.code).expect("checked above")))
        .collect();

    let mut family = Vec::new();
    for setting in SETTINGS {
        family.push(stats("IE", setting, &members, |m| m.is_indo_european()));
        family.push(stats("non-IE", setting, &members, |m| {
            !m.is_indo_european()
        }));
    }

    let mut script_share = Vec::new();
    for setting in SETTINGS {
        for (script_label, known) in [("known", true), ("unknown", false)] {
            for (share_label, share) in [("H", ShareClass::High), ("L", ShareClass::Low)] {
                let name = format!("script-{script_label}/share-{share_label}");
                script_share.push(stats(&name, setting, &members, |m| {
                    m.script_known == known && m.corpus_share_class == share
                }));
            }
        }
    }

    let scatter = members
        .iter()
        .map(|(r, _)| ScatterPoint {
            code: r.code.clone(),
            rank_score: rank_scores.get(&r.code).copied(),
            zero_shot: r.zero_shot,
            few_shot: r.few_shot,
            gain: r.gain(),
        })
        .collect();

    Ok(GroupedReport {
        family,
        script_share,
        scatter,
    })
}
