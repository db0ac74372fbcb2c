//! Evaluation metrics and efficiency comparison.

mod f1;
mod speedup;

use thiserror::Error;

pub use f1::{aggregate, weighted_f1, Aggregate, EvalReport, TagMetrics};
pub use speedup::{speedup, speedup_from_timings, Setting, SpeedupReport};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("gold has {gold} labels but prediction has {pred}")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("sentence {0} has no gold tags")]
    MissingGold(String),
    #[error("runs cover different sentences: {0}")]
    SentenceMismatch(String),
    #[error("decomposed run has zero total wall time")]
    ZeroTime,
}
