//! Deterministic table-driven backend for tests and desk-scale runs.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use super::{
    apply_stop, argmax, check_candidates, BackendError, CandidateScore, CompletionBackend,
    GenerateParams,
};
use crate::corpus::PosTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownTokenPolicy {
    /// Every candidate gets `ln(1/17)`.
    #[default]
    Uniform,
    Error,
}

/// JSON fixture: per-surface label scores plus scripted generations keyed by
/// prompt suffix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MockTable {
    pub unknown_token: UnknownTokenPolicy,
    /// Score for a tag a row does not list.
    pub missing_logprob: Option<f64>,
    pub rows: BTreeMap<String, BTreeMap<PosTag, f64>>,
    pub transcripts: BTreeMap<String, String>,
}

impl MockTable {
    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| BackendError::Config(format!("{}: {e}", path.display())))
    }

    /// The table shipped with the crate's fixtures.
    pub fn bundled() -> Self {
        serde_json::from_str(include_str!("../../fixtures/mock_table.json"))
            .expect("bundled mock table is valid JSON")
    }

    pub fn with_row<I>(mut self, token: &str, scores: I) -> Self
    where
        I: IntoIterator<Item = (PosTag, f64)>,
    {
        self.rows
            .insert(token.to_string(), scores.into_iter().collect());
        self
    }

    pub fn with_transcript(mut self, prompt_suffix: &str, text: &str) -> Self {
        self.transcripts
            .insert(prompt_suffix.to_string(), text.to_string());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallKind {
    Score,
    Generate,
}

/// One entry of the inspection log. Times are offsets from backend creation.
#[derive(Debug, Clone, PartialEq)]
pub struct CallRecord {
    pub id: u64,
    pub kind: CallKind,
    pub prompt: String,
    pub started: Duration,
    pub finished: Duration,
}

pub struct MockBackend {
    table: MockTable,
    latency: Duration,
    max_concurrency: usize,
    scoring: bool,
    log: Mutex<Vec<CallRecord>>,
    in_flight: AtomicUsize,
    peak_in_flight: AtomicUsize,
    next_id: AtomicU64,
    epoch: Instant,
}

impl std::fmt::Debug for MockBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MockBackend")
            .field("rows", &self.table.rows.len())
            .field("transcripts", &self.table.transcripts.len())
            .field("latency", &self.latency)
            .finish()
    }
}

/// Extracts the token a prompt asks about.
///
/// Understands the decomposed query (`... of 'x' is a kind of`, optionally
/// with an ` (occurrence N)` suffix or typeset quotes) and the iterative
/// prompt (`... x_`).
pub fn queried_token(prompt: &str) -> Option<String> {
    if let Some(head) = prompt.strip_suffix(" is a kind of") {
        let head = match head.rfind(" (occurrence ") {
            Some(pos) if head.ends_with(')') => &head[..pos],
            _ => head,
        };
        let head = head.strip_suffix('\'')?;
        let start = head.rfind("tag of ")? + "tag of ".len();
        let quoted = &head[start..];
        let token = quoted
            .strip_prefix('\'')
            .or_else(|| quoted.strip_prefix('`'))?;
        return Some(token.to_string());
    }
    let last_line = prompt.rsplit('\n').next()?;
    let item = last_line.rsplit(' ').next()?;
    item.strip_suffix('_')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
}

/// Splits text into pieces: optional leading whitespace plus either an
/// alphanumeric run or a single other character.
fn pieces(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut start = 0;
    while chars.peek().is_some() {
        while chars.next_if(|&(_, c)| c.is_whitespace()).is_some() {}
        if chars.next_if(|&(_, c)| c.is_alphanumeric()).is_some() {
            while chars.next_if(|&(_, c)| c.is_alphanumeric()).is_some() {}
        } else {
            chars.next();
        }
        let end = chars.peek().map_or(text.len(), |&(i, _)| i);
        out.push(&text[start..end]);
        start = end;
    }
    out
}

impl MockBackend {
    pub fn new(table: MockTable) -> Self {
        MockBackend {
            table,
            latency: Duration::ZERO,
            max_concurrency: 16,
            scoring: true,
            log: Mutex::new(Vec::new()),
            in_flight: AtomicUsize::new(0),
            peak_in_flight: AtomicUsize::new(0),
            next_id: AtomicU64::new(0),
            epoch: Instant::now(),
        }
    }

    pub fn with_latency(mut self, latency: Duration) -> Self {
        self.latency = latency;
        self
    }

    pub fn with_max_concurrency(mut self, max_concurrency: usize) -> Self {
        self.max_concurrency = max_concurrency.max(1);
        self
    }

    /// Simulates an endpoint that returns no token log-probabilities.
    pub fn without_scoring(mut self) -> Self {
        self.scoring = false;
        self
    }

    pub fn strict(mut self) -> Self {
        self.table.unknown_token = UnknownTokenPolicy::Error;
        self
    }

    pub fn table(&self) -> &MockTable {
        &self.table
    }

    pub fn calls(&self) -> Vec<CallRecord> {
        self.log.lock().clone()
    }

    pub fn call_count(&self) -> usize {
        self.log.lock().len()
    }

    pub fn peak_in_flight(&self) -> usize {
        self.peak_in_flight.load(Ordering::SeqCst)
    }

    pub fn reset_log(&self) {
        self.log.lock().clear();
        self.peak_in_flight.store(0, Ordering::SeqCst);
    }

    fn record<T>(&self, kind: CallKind, prompt: &str, work: impl FnOnce() -> T) -> T {
        let id = self.next_id.fetch_add(1, Ordering::SeqCst);
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak_in_flight.fetch_max(now, Ordering::SeqCst);
        let started = self.epoch.elapsed();
        if !self.latency.is_zero() {
            std::thread::sleep(self.latency);
        }
        let out = work();
        let finished = self.epoch.elapsed();
        self.in_flight.fetch_sub(1, Ordering::SeqCst);
        self.log.lock().push(CallRecord {
            id,
            kind,
            prompt: prompt.to_string(),
            started,
            finished,
        });
        out
    }

    fn row_scores(
        &self,
        token: &str,
        candidates: &[PosTag],
    ) -> Result<Vec<CandidateScore>, BackendError> {
        let missing = self.table.missing_logprob.unwrap_or(-30.0);
        match self.table.rows.get(token) {
            Some(row) => Ok(candidates
                .iter()
                .map(|&label| CandidateScore {
                    label,
                    logprob: row.get(&label).copied().unwrap_or(missing),
                })
                .collect()),
            None => match self.table.unknown_token {
                UnknownTokenPolicy::Uniform => {
                    let uniform = -(PosTag::COUNT as f64).ln();
                    Ok(candidates
                        .iter()
                        .map(|&label| CandidateScore {
                            label,
                            logprob: uniform,
                        })
                        .collect())
                }
                UnknownTokenPolicy::Error => Err(BackendError::UnknownToken(token.to_string())),
            },
        }
    }

    fn scripted(&self, prompt: &str) -> Result<String, BackendError> {
        let scripted = self
            .table
            .transcripts
            .iter()
            .filter(|(suffix, _)| prompt.ends_with(suffix.as_str()))
            .max_by_key(|(suffix, _)| suffix.len());
        if let Some((_, text)) = scripted {
            return Ok(text.clone());
        }
        // no transcript: answer with the scoring argmax in the prompt's format
        let token = queried_token(prompt)
            .ok_or_else(|| BackendError::Protocol("cannot locate the queried token".into()))?;
        let scores = self.row_scores(&token, &PosTag::ALL)?;
        let tag = argmax(&scores).expect("non-empty candidates");
        Ok(if prompt.ends_with("is a kind of") {
            format!(" {tag}.\n")
        } else {
            format!("{tag} ")
        })
    }
}

impl CompletionBackend for MockBackend {
    fn score_candidates(
        &self,
        prompt: &str,
        candidates: &[PosTag],
    ) -> Result<Vec<CandidateScore>, BackendError> {
        check_candidates(candidates)?;
        if !self.scoring {
            return Err(BackendError::Capability(
                "endpoint returns no token log-probabilities".into(),
            ));
        }
        self.record(CallKind::Score, prompt, || {
            let token = queried_token(prompt)
                .ok_or_else(|| BackendError::Protocol("cannot locate the queried token".into()))?;
            self.row_scores(&token, candidates)
        })
    }

    fn generate(&self, prompt: &str, params: &GenerateParams) -> Result<String, BackendError> {
        if params.max_tokens == 0 {
            return Err(BackendError::Config("max_tokens must be at least 1".into()));
        }
        self.record(CallKind::Generate, prompt, || {
            let full = self.scripted(prompt)?;
            let stopped = apply_stop(&full, &params.stop);
            Ok(pieces(stopped)
                .into_iter()
                .take(params.max_tokens)
                .collect::<String>())
        })
    }

    fn max_concurrency(&self) -> usize {
        self.max_concurrency
    }
}
