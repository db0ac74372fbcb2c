use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::corpus::PosTag;
use crate::tagger::Prediction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Pooled token-level evaluation of one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub language: String,
    /// All 17 tags, including those with zero support.
    pub per_tag: BTreeMap<PosTag, TagMetrics>,
    /// Support-weighted mean of per-tag F1.
    pub weighted_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub accuracy: f64,
    /// `confusion[gold][predicted]`, indexed by canonical tag order.
    pub confusion: [[usize; PosTag::COUNT]; PosTag::COUNT],
    pub n_tokens: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-tag precision, recall and F1 (0/0 counts as 0) and their
/// gold-support-weighted averages.
pub fn weighted_f1(gold: &[PosTag], pred: &[PosTag]) -> Result<EvalReport, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut confusion = [[0usize; PosTag::COUNT]; PosTag::COUNT];
    for (g, p) in gold.iter().zip(pred) {
        confusion[g.index()][p.index()] += 1;
    }
    let n = gold.len();
    let mut per_tag = BTreeMap::new();
    let (mut wf1, mut wp, mut wr) = (0.0, 0.0, 0.0);
    let mut correct = 0;
    for tag in PosTag::ALL {
        let i = tag.index();
        let tp = confusion[i][i];
        let support: usize = confusion[i].iter().sum();
        let predicted: usize = confusion.iter().map(|row| row[i]).sum();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let weight = support as f64 / n as f64;
        wf1 += weight * f1;
        wp += weight * precision;
        wr += weight * recall;
        correct += tp;
        per_tag.insert(
            tag,
            TagMetrics {
                precision,
                recall,
                f1,
                support,
            },
        );
    }
    Ok(EvalReport {
        language: String::new(),
        per_tag,
        weighted_f1: wf1,
        weighted_precision: wp,
        weighted_recall: wr,
        accuracy: correct as f64 / n as f64,
        confusion,
        n_tokens: n,
    })
}

impl EvalReport {
    /// Pools every token of `predictions` into one report.
    pub fn from_predictions(
        language: &str,
        predictions: &[Prediction],
    ) -> Result<EvalReport, MetricsError> {
        let mut gold = Vec::new();
        let mut pred = Vec::new();
        for p in predictions {
            let g = p
                .gold
                .as_ref()
                .ok_or_else(|| MetricsError::MissingGold(p.sentence_id.clone()))?;
            if g.len() != p.predicted.len() {
                return Err(MetricsError::LengthMismatch {
                    gold: g.len(),
                    pred: p.predicted.len(),
                });
            }
            gold.extend_from_slice(g);
            pred.extend_from_slice(&p.predicted);
        }
        let mut report = weighted_f1(&gold, &pred)?;
        report.language = language.to_string();
        Ok(report)
    }

    pub fn with_language(mut self, language: &str) -> Self {
        self.language = language.to_string();
        self
    }
}

/// Per-language weighted F1 with English reported separately and the
/// unweighted mean over the other languages (`mult.`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub rows: Vec<(String, f64)>,
    pub english: Option<f64>,
    /// Mean over non-English languages; `None` when only English is present.
    pub mult: Option<f64>,
    /// Mean over every language.
    pub mean: f64,
}

pub fn aggregate(reports: &[EvalReport]) -> Result<Aggregate, MetricsError> {
    if reports.is_empty() {
        return Err(MetricsError::Empty);
    }
    let rows: Vec<(String, f64)> = reports
        .iter()
        .map(|r| (r.language.clone(), r.weighted_f1))
        .collect();
    let english = rows.iter().find(|(l, _)| l == "en").map(|(_, f)| *f);
    let others: Vec<f64> = rows
        .iter()
        .filter(|(l, _)| l != "en")
        .map(|(_, f)| *f)
        .collect();
    let mult = (!others.is_empty()).then(|| others.iter().sum::<f64>() / others.len() as f64);
    let mean = rows.iter().map(|(_, f)| f).sum::<f64>() / rows.len() as f64;
    Ok(Aggregate {
        rows,
        english,
        mult,
        mean,
    })
}
