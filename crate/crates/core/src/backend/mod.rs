//! The model interface: score candidate labels after a prompt, or generate a
//! continuation.

mod http;
mod mock;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::PosTag;

pub use http::HttpBackend;
pub use mock::{queried_token, CallKind, CallRecord, MockBackend, MockTable, UnknownTokenPolicy};

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("backend cannot score candidates: {0}; use generation mode (--mode gen) instead")]
    Capability(String),
    #[error("mock table has no row for token `{0}`")]
    UnknownToken(String),
    #[error("invalid candidate list: {0}")]
    InvalidCandidates(String),
    #[error("unexpected backend response: {0}")]
    Protocol(String),
    #[error("backend configuration: {0}")]
    Config(String),
}

/// Log-probability of a label continuation (natural log, summed over the
/// label's token pieces).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub label: PosTag,
    pub logprob: f64,
}

/// Generation parameters. Decoding is greedy unless `temperature > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateParams {
    pub max_tokens: usize,
    pub temperature: f64,
    pub stop: Vec<String>,
}

impl GenerateParams {
    pub fn greedy(max_tokens: usize, stop: &[&str]) -> Self {
        GenerateParams {
            max_tokens,
            temperature: 0.0,
            stop: stop.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A completion request as sent over the wire.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionRequest {
    pub model: String,
    pub prompt: String,
    pub max_tokens: usize,
    pub temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub logprobs: Option<u32>,
    pub echo: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<Vec<String>>,
}

pub trait CompletionBackend: Send + Sync {
    /// One score per candidate, in candidate order.
    fn score_candidates(
        &self,
        prompt: &str,
        candidates: &[PosTag],
    ) -> Result<Vec<CandidateScore>, BackendError>;

    fn generate(&self, prompt: &str, params: &GenerateParams) -> Result<String, BackendError>;

    /// Upper bound on concurrent calls this backend should receive.
    fn max_concurrency(&self) -> usize;
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for Arc<B> {
    fn score_candidates(
        &self,
        prompt: &str,
        candidates: &[PosTag],
    ) -> Result<Vec<CandidateScore>, BackendError> {
        (**self).score_candidates(prompt, candidates)
    }

    fn generate(&self, prompt: &str, params: &GenerateParams) -> Result<String, BackendError> {
        (**self).generate(prompt, params)
    }

    fn max_concurrency(&self) -> usize {
        (**self).max_concurrency()
    }
}

pub(crate) fn check_candidates(candidates: &[PosTag]) -> Result<(), BackendError> {
    if candidates.is_empty() {
        return Err(BackendError::InvalidCandidates("empty".into()));
    }
    let mut seen = [false; PosTag::COUNT];
    for tag in candidates {
        if std::mem::replace(&mut seen[tag.index()], true) {
            return Err(BackendError::InvalidCandidates(format!("duplicate {tag}")));
        }
    }
    Ok(())
}

/// Highest-scoring label; ties go to the label earliest in canonical order.
pub fn argmax(scores: &[CandidateScore]) -> Option<PosTag> {
    scores
        .iter()
        .fold(None::<&CandidateScore>, |best, s| match best {
            Some(b) if b.logprob > s.logprob || (b.logprob == s.logprob && b.label < s.label) => {
                Some(b)
            }
            _ => Some(s),
        })
        .map(|s| s.label)
}

/// Truncates `text` before the earliest occurrence of any stop sequence.
pub fn apply_stop<'a>(text: &'a str, stop: &[String]) -> &'a str {
    let cut = stop
        .iter()
        .filter(|s| !s.is_empty())
        .filter_map(|s| text.find(s.as_str()))
        .min()
        .unwrap_or(text.len());
    &text[..cut]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Mock,
    Http,
}

/// How per-piece label log-probabilities are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreAggregation {
    #[default]
    Sum,
    /// Sum divided by the number of pieces.
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub endpoint: String,
    pub model_name: String,
    pub max_concurrency: usize,
    pub timeout_ms: u64,
    pub retry: u32,
    /// Initial backoff; doubles after every failed attempt.
    pub backoff_ms: u64,
    /// Environment variable holding the bearer token.
    pub api_key_env: Option<String>,
    pub score_aggregation: ScoreAggregation,
    /// Mock scoring table (JSON). The bundled fixture is used when absent.
    pub mock_table: Option<PathBuf>,
    /// Artificial per-call latency of the mock.
    pub mock_latency_ms: u64,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::Mock,
            endpoint: "http://127.0.0.1:8000/v1/completions".to_string(),
            model_name: "mistralai/Mistral-7B-Instruct-v0.2".to_string(),
            max_concurrency: 16,
            timeout_ms: 60_000,
            retry: 3,
            backoff_ms: 250,
            api_key_env: None,
            score_aggregation: ScoreAggregation::Sum,
            mock_table: None,
            mock_latency_ms: 0,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), BackendError> {
        if self.max_concurrency == 0 {
            return Err(BackendError::Config(
                "max_concurrency must be at least 1".into(),
            ));
        }
        if self.kind == BackendKind::Http && self.endpoint.is_empty() {
            return Err(BackendError::Config(
                "http backend needs an endpoint".into(),
            ));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    /// Instantiates the configured backend.
    pub fn build(&self) -> Result<Arc<dyn CompletionBackend>, BackendError> {
        self.validate()?;
        Ok(match self.kind {
            BackendKind::Mock => {
                let table = match &self.mock_table {
                    Some(path) => MockTable::load(path)?,
                    None => MockTable::bundled(),
                };
                Arc::new(
                    MockBackend::new(table)
                        .with_latency(Duration::from_millis(self.mock_latency_ms))
                        .with_max_concurrency(self.max_concurrency),
                )
            }
            BackendKind::Http => Arc::new(HttpBackend::new(self)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(label: PosTag, logprob: f64) -> CandidateScore {
        CandidateScore { label, logprob }
    }

    #[test]
    fn argmax_prefers_highest_then_canonical_order() {
        assert_eq!(
            argmax(&[s(PosTag::Det, -1.5), s(PosTag::Adj, -0.2)]),
            Some(PosTag::Adj)
        );
        assert_eq!(
            argmax(&[
                s(PosTag::Verb, -1.0),
                s(PosTag::Noun, -1.0),
                s(PosTag::X, -3.0)
            ]),
            Some(PosTag::Noun)
        );
        assert_eq!(argmax(&[s(PosTag::Noun, -9.0)]), Some(PosTag::Noun));
        assert_eq!(argmax(&[]), None);
    }

    #[test]
    fn stop_sequences() {
        let stop = vec!["\n".to_string(), " ".to_string()];
        assert_eq!(apply_stop("ADJ.\nSentence", &stop), "ADJ.");
        assert_eq!(apply_stop("\nADJ", &stop), "");
        assert_eq!(apply_stop("NOUN", &[]), "NOUN");
        assert_eq!(apply_stop("NOUN", &[String::new()]), "NOUN");
    }

    #[test]
    fn candidate_validation() {
        assert!(check_candidates(&[]).is_err());
        assert!(check_candidates(&[PosTag::Noun, PosTag::Noun]).is_err());
        assert!(check_candidates(&PosTag::ALL).is_ok());
    }

    #[test]
    fn config_validation_and_toml() {
        let cfg = BackendConfig {
            max_concurrency: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg: BackendConfig =
            toml::from_str("kind = \"http\"\nendpoint = \"http://x/v1/completions\"\nretry = 1")
                .unwrap();
        assert_eq!(cfg.kind, BackendKind::Http);
        assert_eq!(cfg.retry, 1);
        assert_eq!(cfg.max_concurrency, 16);
    }
}
