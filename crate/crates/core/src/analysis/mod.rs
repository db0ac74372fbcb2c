//! Typological similarity of evaluation languages to English and grouped
//! views of per-language results.

mod grouping;
mod similarity;

use thiserror::Error;

pub use grouping::{group_report, GroupStats, GroupedReport, LanguageResult, ScatterPoint};
pub use similarity::{
    cosine_similarity, parse_language_vectors, rank_languages, rank_score, similarity_table,
    Feature, LanguageVector, SimilarityRow,
};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("cosine similarity is undefined for an empty or all-zero vector")]
    ZeroVector,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("language {code}: feature {feature} has missing values; impute them upstream")]
    MissingValue { code: String, feature: String },
    #[error("language {0} lacks one of the five feature vectors")]
    MissingFeature(String),
    #[error("reference language {0} has no vectors")]
    MissingReference(String),
    #[error("need vectors for the reference language and at least one other; got {0} language(s)")]
    TooFewLanguages(usize),
    #[error("no language metadata for: {0}")]
    MissingMeta(String),
}
