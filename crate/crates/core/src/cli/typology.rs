use std::collections::BTreeMap;
use std::path::Path;

use super::output::{csv_text, write_atomic};
use super::ConfigError;
use crate::analysis::{
    group_report, parse_language_vectors, similarity_table, Feature, GroupedReport, LanguageResult,
    SimilarityRow,
};
use crate::corpus::{iso639_3, parse_language_meta, LanguageTable, EVALUATION_LANGUAGES};
use crate::error::{Error, Result};

/// Typology vectors of English and the 37 evaluation languages.
pub const BUNDLED_VECTORS: &str = include_str!("../../fixtures/similarity/lang_vectors.txt");
/// Family, script and corpus-share class of the 38 evaluation languages.
pub const BUNDLED_META: &str = include_str!("../../fixtures/lang_meta.tsv");

pub const REFERENCE: &str = "eng";

fn read_text(path: Option<&Path>, bundled: &'static str) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e)),
        None => Ok(bundled.to_string()),
    }
}

/// Similarity of every evaluation language to English. The vector file must
/// cover English and all 37 other evaluation languages.
pub fn similarity_rows(vectors: Option<&Path>) -> Result<Vec<SimilarityRow>> {
    let text = read_text(vectors, BUNDLED_VECTORS)?;
    let vectors = parse_language_vectors(&text)?;
    let present: Vec<&str> = vectors.iter().map(|v| v.code.as_str()).collect();
    let missing: Vec<&str> = EVALUATION_LANGUAGES
        .iter()
        .filter_map(|c| iso639_3(c))
        .filter(|c| !present.contains(c))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Output(format!(
            "vector file lacks {} of the 38 languages: {}",
            missing.len(),
            missing.join(", ")
        )));
    }
    Ok(similarity_table(&vectors, REFERENCE)?)
}

/// Table layout: `pair, syn., syn_rank, ..., geo_rank, rank_score`.
pub fn similarity_csv(rows: &[SimilarityRow]) -> Result<String> {
    let mut header = vec!["pair".to_string()];
    for f in Feature::ALL {
        header.push(format!("{}.", f.short()));
        header.push(format!("{}_rank", f.short()));
    }
    header.push("rank_score".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_text(
        &header,
        rows.iter().map(|r| {
            let mut cells = vec![format!("{REFERENCE}-{}", r.code)];
            for f in Feature::ALL {
                cells.push(format!("{:.2}", r.sims[&f]));
                cells.push(r.ranks[&f].to_string());
            }
            cells.push(format!("{:.1}", r.rank_score));
            cells
        }),
    )
}

/// Reads `language` and `weighted_f1` from a run's `results.csv`, skipping
/// failed languages.
pub fn read_results(path: &Path) -> Result<BTreeMap<String, f64>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Output(format!("{}: {e}", path.display())))?;
    let bad = |m: String| Error::Output(format!("{}: {m}", path.display()));
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let (lang_col, f1_col) = (col("language")?, col("weighted_f1")?);
    let mut out = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let f1 = record.get(f1_col).unwrap_or_default();
        if f1.is_empty() {
            continue;
        }
        let value = f1
            .parse::<f64>()
            .map_err(|_| bad(format!("invalid weighted_f1 `{f1}`")))?;
        out.insert(record.get(lang_col).unwrap_or_default().to_string(), value);
    }
    Ok(out)
}

/// Grouped report over the languages present in both runs.
pub fn group_runs(
    zero: &BTreeMap<String, f64>,
    few: &BTreeMap<String, f64>,
    meta: Option<&Path>,
    vectors: Option<&Path>,
) -> Result<GroupedReport> {
    let meta: LanguageTable = parse_language_meta(&read_text(meta, BUNDLED_META)?)?;
    let results: Vec<LanguageResult> = zero
        .iter()
        .filter_map(|(code, z)| {
            few.get(code).map(|f| LanguageResult {
                code: code.clone(),
                zero_shot: *z,
                few_shot: *f,
            })
        })
        .collect();
    if results.is_empty() {
        return Err(ConfigError::Invalid("the two runs share no language".into()).into());
    }
    let rank_scores: BTreeMap<String, f64> = similarity_rows(vectors)?
        .into_iter()
        .filter_map(|r| {
            EVALUATION_LANGUAGES
                .iter()
                .find(|two| iso639_3(two) == Some(r.code.as_str()))
                .map(|two| (two.to_string(), r.rank_score))
        })
        .collect();
    Ok(group_report(&results, &meta, &rank_scores)?)
}

/// Writes `groups.csv` (long format), `group_means.csv` and `scatter.csv`.
pub fn write_group_report(report: &GroupedReport, out: &Path) -> Result<()> {
    let setting = |s: crate::metrics::Setting| match s {
        crate::metrics::Setting::ZeroShot => "zero",
        crate::metrics::Setting::FewShot => "few",
    };
    let all = || report.family.iter().chain(&report.script_share);
    let long = csv_text(
        &["group", "setting", "language", "f1"],
        all().flat_map(|g| {
            g.values.iter().map(move |(code, v)| {
                [
                    g.group.clone(),
                    setting(g.setting).into(),
                    code.clone(),
                    format!("{v:.6}"),
                ]
            })
        }),
    )?;
    let means = csv_text(
        &["group", "setting", "n", "mean", "empty"],
        all().map(|g| {
            [
                g.group.clone(),
                setting(g.setting).into(),
                g.values.len().to_string(),
                g.mean.map(|m| format!("{m:.6}")).unwrap_or_default(),
                g.empty.to_string(),
            ]
        }),
    )?;
    let scatter = csv_text(
        &["language", "rank_score", "zero_shot", "few_shot", "gain"],
        report.scatter.iter().map(|p| {
            [
                p.code.clone(),
                p.rank_score.map(|r| format!("{r:.1}")).unwrap_or_default(),
                format!("{:.6}", p.zero_shot),
                format!("{:.6}", p.few_shot),
                format!("{:.6}", p.gain),
            ]
        }),
    )?;
    write_atomic(&out.join("groups.csv"), long.as_bytes())?;
    write_atomic(&out.join("group_means.csv"), means.as_bytes())?;
    write_atomic(&out.join("scatter.csv"), scatter.as_bytes())?;
    Ok(())
}
