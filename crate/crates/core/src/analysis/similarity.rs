use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// The five typological views of a language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Syntactic,
    Phonological,
    Inventory,
    Family,
    Geographic,
}

impl Feature {
    pub const ALL: [Feature; 5] = [
        Feature::Syntactic,
        Feature::Phonological,
        Feature::Inventory,
        Feature::Family,
        Feature::Geographic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Syntactic => "syntactic",
            Feature::Phonological => "phonological",
            Feature::Inventory => "inventory",
            Feature::Family => "family",
            Feature::Geographic => "geographic",
        }
    }

    /// Three-letter column prefix used in report tables.
    pub fn short(self) -> &'static str {
        match self {
            Feature::Syntactic => "syn",
            Feature::Phonological => "pho",
            Feature::Inventory => "inv",
            Feature::Family => "fam",
            Feature::Geographic => "geo",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Feature::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s || f.short() == s)
            .ok_or_else(|| format!("unknown feature `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageVector {
    pub code: String,
    pub features: BTreeMap<Feature, Vec<f64>>,
}

/// Parses vector sections:
///
/// ```text
/// [eng]
/// syntactic 1 0 1 ...
/// phonological ...
/// ```
///
/// Values that are `--`, `nan` or otherwise non-numeric are refused.
pub fn parse_language_vectors(text: &str) -> Result<Vec<LanguageVector>, AnalysisError> {
    let mut out: Vec<LanguageVector> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(code) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push(LanguageVector {
                code: code.trim().to_string(),
                features: BTreeMap::new(),
            });
            continue;
        }
        let current = out.last_mut().ok_or_else(|| AnalysisError::Parse {
            line: line_no,
            message: "feature line before any [language] header".into(),
        })?;
        let mut parts = line.split_whitespace();
        let feature: Feature = parts
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|message| AnalysisError::Parse {
                line: line_no,
                message,
            })?;
        let values = parts
            .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| AnalysisError::MissingValue {
                code: current.code.clone(),
                feature: feature.to_string(),
            })?;
        if values.is_empty() {
            return Err(AnalysisError::MissingValue {
                code: current.code.clone(),
                feature: feature.to_string(),
            });
        }
        current.features.insert(feature, values);
    }
    for lang in &out {
        if lang.features.len() != Feature::ALL.len() {
            return Err(AnalysisError::MissingFeature(lang.code.clone()));
        }
    }
    Ok(out)
}

/// `100 · (u·v) / (|u| |v|)`.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, AnalysisError> {
    if u.len() != v.len() {
        return Err(AnalysisError::LengthMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|b| b * b).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(AnalysisError::ZeroVector);
    }
    Ok(100.0 * dot / (nu * nv))
}

/// Ranks `1..=N` with `N` for the most similar language. Equal similarities
/// are ordered by code: the alphabetically earlier code ranks higher.
pub fn rank_languages(sims: &BTreeMap<String, f64>) -> BTreeMap<String, usize> {
    let mut order: Vec<(&String, f64)> = sims.iter().map(|(c, s)| (c, *s)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n = order.len();
    order
        .into_iter()
        .enumerate()
        .map(|(pos, (code, _))| (code.clone(), n - pos))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRow {
    pub code: String,
    /// Cosine similarity to the reference, in percent.
    pub sims: BTreeMap<Feature, f64>,
    pub ranks: BTreeMap<Feature, usize>,
    pub rank_score: f64,
}

/// Mean of the per-feature ranks.
pub fn rank_score(ranks: &BTreeMap<Feature, usize>) -> f64 {
    ranks.values().sum::<usize>() as f64 / ranks.len() as f64
}

/// Similarity of every language to `reference`, ranked per feature and
/// sorted by descending rank score (ties by code).
pub fn similarity_table(
    vectors: &[LanguageVector],
    reference: &str,
) -> Result<Vec<SimilarityRow>, AnalysisError> {
    let reference_vec = vectors
        .iter()
        .find(|v| v.code == reference)
        .ok_or_else(|| AnalysisError::MissingReference(reference.to_string()))?;
    let others: Vec<&LanguageVector> = vectors.iter().filter(|v| v.code != reference).collect();
    if others.is_empty() {
        return Err(AnalysisError::TooFewLanguages(vectors.len()));
    }

    let mut sims: BTreeMap<String, BTreeMap<Feature, f64>> = BTreeMap::new();
    for lang in &others {
        let mut row = BTreeMap::new();
        for feature in Feature::ALL {
            let u = &reference_vec.features[&feature];
            let v = lang
                .features
                .get(&feature)
                .ok_or_else(|| AnalysisError::MissingFeature(lang.code.clone()))?;
            row.insert(feature, cosine_similarity(u, v)?);
        }
        sims.insert(lang.code.clone(), row);
    }

    let mut ranks: BTreeMap<String, BTreeMap<Feature, usize>> = BTreeMap::new();
    for feature in Feature::ALL {
        let column: BTreeMap<String, f64> = sims
            .iter()
            .map(|(code, row)| (code.clone(), row[&feature]))
            .collect();
        for (code, rank) in rank_languages(&column) {
            ranks.entry(code).or_default().insert(feature, rank);
        }
    }

    let mut rows: Vec<SimilarityRow> = sims
        .into_iter()
        .map(|(code, sims)| {
            let ranks = ranks.remove(&code).unwrap_or_default();
            SimilarityRow {
                rank_score: rank_score(&ranks),
                code,
                sims,
                ranks,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.rank_score
            .total_cmp(&a.rank_score)
            .then_with(|| a.code.cmp(&b.code))
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cosine_basics() {
        assert!(
            (cosine_similarity(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap() - 100.0).abs() < 1e-12
        );
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 5.0]).unwrap(), 0.0);
        assert_eq!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]).unwrap_err(),
            AnalysisError::ZeroVector
        );
        assert_eq!(
            cosine_similarity(&[1.0], &[1.0, 1.0]).unwrap_err(),
            AnalysisError::LengthMismatch(1, 2)
        );
        assert_eq!(
            cosine_similarity(&[], &[]).unwrap_err(),
            AnalysisError::ZeroVector
        );
    }

    fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(c, s)| (c.to_string(), *s)).collect()
    }

    #[test]
    fn ranking_direction_and_ties() {
        let r = rank_languages(&map(&[("a", 0.9), ("b", 0.5), ("c", 0.1)]));
        assert_eq!((r["a"], r["b"], r["c"]), (3, 2, 1));
        let r = rank_languages(&map(&[("x", 0.5), ("b", 0.5), ("c", 0.9)]));
        assert_eq!((r["c"], r["b"], r["x"]), (3, 2, 1));
    }

    #[test]
    fn rank_score_means() {
        let ranks = |v: [usize; 5]| -> BTreeMap<Feature, usize> {
            Feature::ALL.iter().copied().zip(v).collect()
        };
        assert!((rank_score(&ranks([2, 1, 1, 12, 5])) - 4.2).abs() < 1e-12);
        assert!((rank_score(&ranks([37, 18, 36, 35, 37])) - 32.6).abs() < 1e-12);
        assert_eq!(rank_score(&ranks([7; 5])), 7.0);
    }

    const SMALL: &str = "\
# toy vectors
[eng]
syntactic 1 0 1
phonological 1 1
inventory 1 0
family 1 0 0
geographic 0.5 0.5

[aaa]
syntactic 1 0 1
phonological 1 0
inventory 1 1
family 1 1 0
geographic 0.5 0.4

[bbb]
syn 0 1 1
pho 1 1
inv 0 1
fam 1 0 0
geo 0.1 0.9
";

    #[test]
    fn parse_and_table() {
        let vectors = parse_language_vectors(SMALL).unwrap();
        assert_eq!(vectors.len(), 3);
        let rows = similarity_table(&vectors, "eng").unwrap();
        assert_eq!(rows.len(), 2);
        let aaa = rows.iter().find(|r| r.code == "aaa").unwrap();
        assert!((aaa.sims[&Feature::Syntactic] - 100.0).abs() < 1e-9);
        assert_eq!(aaa.ranks[&Feature::Syntactic], 2);
        assert_eq!(aaa.ranks[&Feature::Phonological], 1);
        assert_eq!(aaa.ranks[&Feature::Inventory], 2);
        assert_eq!(aaa.ranks[&Feature::Family], 1);
        assert_eq!(aaa.ranks[&Feature::Geographic], 2);
        assert!((aaa.rank_score - 1.6).abs() < 1e-12);
        assert_eq!(rows[0].code, "aaa");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_language_vectors("syntactic 1 2\n"),
            Err(AnalysisError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_language_vectors("[eng]\nsyntactic 1 -- 2\n"),
            Err(AnalysisError::MissingValue { .. })
        ));
        assert!(matches!(
            parse_language_vectors("[eng]\nsyntactic 1 nan\n"),
            Err(AnalysisError::MissingValue { .. })
        ));
        assert!(matches!(
            parse_language_vectors("[eng]\nsyntactic 1 2\n"),
            Err(AnalysisError::MissingFeature(_))
        ));
        assert!(matches!(
            parse_language_vectors("[eng]\ncolour 1 2\n"),
            Err(AnalysisError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn table_needs_reference_and_others() {
        let vectors = parse_language_vectors(SMALL).unwrap();
        assert_eq!(
            similarity_table(&vectors, "zzz").unwrap_err(),
            AnalysisError::MissingReference("zzz".into())
        );
        assert_eq!(
            similarity_table(&vectors[..1], "eng").unwrap_err(),
            AnalysisError::TooFewLanguages(1)
        );
    }

    proptest! {
        #[test]
        fn ranks_are_a_permutation(sims in prop::collection::vec(-1.0f64..1.0, 1..40)) {
            let m: BTreeMap<String, f64> =
                sims.iter().enumerate().map(|(i, s)| (format!("l{i:02}"), *s)).collect();
            let r = rank_languages(&m);
            let mut ranks: Vec<usize> = r.values().copied().collect();
            ranks.sort_unstable();
            prop_assert_eq!(ranks, (1..=m.len()).collect::<Vec<_>>());
        }

        #[test]
        fn ranks_invariant_under_monotone_transform(sims in prop::collection::vec(0.01f64..1.0, 2..40)) {
            let m: BTreeMap<String, f64> =
                sims.iter().enumerate().map(|(i, s)| (format!("l{i:02}"), *s)).collect();
            let t: BTreeMap<String, f64> =
                m.iter().map(|(c, s)| (c.clone(), 3.0 * s.ln() + 7.0)).collect();
            prop_assert_eq!(rank_languages(&m), rank_languages(&t));
        }
    }
}
