//! Blocking client for an OpenAI-style `/v1/completions` endpoint.
//!
//! Scoring teacher-forces ` LABEL` after the prompt with `echo = true` and
//! sums the echoed log-probabilities of the tokens that fall inside the label
//! span. One POST is issued per candidate.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use parking_lot::{Condvar, Mutex};
use serde::Deserialize;

use super::{
    apply_stop, check_candidates, BackendConfig, BackendError, CandidateScore, CompletionBackend,
    CompletionRequest, GenerateParams, ScoreAggregation,
};
use crate::corpus::PosTag;

#[derive(Debug, Deserialize)]
struct CompletionResponse {
    #[serde(default)]
    choices: Vec<Choice>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    #[serde(default)]
    text: String,
    logprobs: Option<Logprobs>,
}

#[derive(Debug, Deserialize)]
struct Logprobs {
    #[serde(default)]
    tokens: Vec<String>,
    #[serde(default)]
    token_logprobs: Vec<Option<f64>>,
    #[serde(default)]
    text_offset: Vec<usize>,
}

/// Counting semaphore bounding in-flight requests.
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Gate {
    fn new(permits: usize) -> Self {
        Gate {
            free: Mutex::new(permits),
            cv: Condvar::new(),
        }
    }

    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        {
            let mut free = self.free.lock();
            while *free == 0 {
                self.cv.wait(&mut free);
            }
            *free -= 1;
        }
        let out = f();
        *self.free.lock() += 1;
        self.cv.notify_one();
        out
    }
}

enum Attempt {
    Retry(String),
    Fatal(BackendError),
}

pub struct HttpBackend {
    agent: ureq::Agent,
    endpoint: String,
    model: String,
    api_key: Option<String>,
    retries: u32,
    backoff: Duration,
    aggregation: ScoreAggregation,
    max_concurrency: usize,
    gate: Gate,
    next_id: AtomicU64,
}

impl HttpBackend {
    pub fn new(config: &BackendConfig) -> Result<Self, BackendError> {
        config.validate()?;
        let api_key = match &config.api_key_env {
            Some(var) => Some(std::env::var(var).map_err(|_| {
                BackendError::Config(format!("environment variable {var} is not set"))
            })?),
            None => None,
        };
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout()))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpBackend {
            agent,
            endpoint: config.endpoint.clone(),
            model: config.model_name.clone(),
            api_key,
            retries: config.retry,
            backoff: Duration::from_millis(config.backoff_ms),
            aggregation: config.score_aggregation,
            max_concurrency: config.max_concurrency,
            gate: Gate::new(config.max_concurrency),
            next_id: AtomicU64::new(0),
        })
    }

    fn attempt(&self, request: &CompletionRequest, id: u64) -> Result<CompletionResponse, Attempt> {
        let mut call = self
            .agent
            .post(&self.endpoint)
            .header("X-Request-Id", &id.to_string());
        if let Some(key) = &self.api_key {
            call = call.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = call
            .send_json(request)
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        match status {
            200..=299 => serde_json::from_str(&body)
                .map_err(|e| Attempt::Fatal(BackendError::Protocol(format!("{e}: {body}")))),
            429 | 500..=599 => Err(Attempt::Retry(format!("HTTP {status}: {body}"))),
            _ => Err(Attempt::Fatal(BackendError::Protocol(format!(
                "HTTP {status}: {body}"
            )))),
        }
    }

    /// Sends `request`, retrying transport failures, 429 and 5xx with
    /// exponential backoff.
    fn send(&self, request: &CompletionRequest) -> Result<Choice, BackendError> {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let attempts = self.retries + 1;
        let mut last = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(self.backoff * 2u32.saturating_pow(attempt - 1));
            }
            match self.gate.run(|| self.attempt(request, id)) {
                Ok(response) => {
                    return response
                        .choices
                        .into_iter()
                        .next()
                        .ok_or_else(|| BackendError::Protocol("response without choices".into()))
                }
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(message)) => last = message,
            }
        }
        Err(BackendError::Transport {
            attempts,
            message: last,
        })
    }

    fn score_one(&self, prompt: &str, label: PosTag) -> Result<f64, BackendError> {
        let continuation = format!(" {label}");
        let request = CompletionRequest {
            model: self.model.clone(),
            prompt: format!("{prompt}{continuation}"),
            max_tokens: 1,
            temperature: 0.0,
            logprobs: Some(1),
            echo: true,
            stop: None,
        };
        let choice = self.send(&request)?;
        let logprobs = choice
            .logprobs
            .ok_or_else(|| BackendError::Capability("response carries no logprobs".into()))?;
        label_logprob(
            &logprobs,
            prompt.chars().count(),
            continuation.chars().count(),
            self.aggregation,
        )
    }
}

/// Combines echoed token log-probabilities whose character offset lies in
/// `[start, start + len)`.
fn label_logprob(
    logprobs: &Logprobs,
    start: usize,
    len: usize,
    aggregation: ScoreAggregation,
) -> Result<f64, BackendError> {
    if logprobs.text_offset.len() != logprobs.token_logprobs.len() {
        return Err(BackendError::Protocol(
            "text_offset and token_logprobs differ in length".into(),
        ));
    }
    let end = start + len;
    let mut total = 0.0;
    let mut pieces = 0usize;
    for (offset, lp) in logprobs.text_offset.iter().zip(&logprobs.token_logprobs) {
        if (start..end).contains(offset) {
            let lp = lp.ok_or_else(|| {
                BackendError::Protocol("label token without a log-probability".into())
            })?;
            total += lp;
            pieces += 1;
        }
    }
    if pieces == 0 {
        return Err(BackendError::Protocol(format!(
            "no echoed token inside the label span ({} tokens returned)",
            logprobs.tokens.len()
        )));
    }
    Ok(match aggregation {
        ScoreAggregation::Sum => total,
        ScoreAggregation::Mean => total / pieces as f64,
    })
}

impl CompletionBackend for HttpBackend {
    fn score_candidates(
        &self,
        prompt: &str,
        candidates: &[PosTag],
    ) -> Result<Vec<CandidateScore>, BackendError> {
        check_candidates(candidates)?;
        candidates
            .iter()
            .map(|&label| {
                Ok(CandidateScore {
                    label,
                    logprob: self.score_one(prompt, label)?,
                })
            })
            .collect()
    }

    fn generate(&self, prompt: &str, params: &GenerateParams) -> Result<String, BackendError> {
        if params.max_tokens == 0 {
            return Err(BackendError::Config("max_tokens must be at least 1".into()));
        }
        let request = CompletionRequest {
            model: self.model.clone(),
            prompt: prompt.to_string(),
            max_tokens: params.max_tokens,
            temperature: params.temperature,
            logprobs: None,
            echo: false,
            stop: (!params.stop.is_empty()).then(|| params.stop.clone()),
        };
        let choice = self.send(&request)?;
        Ok(apply_stop(&choice.text, &params.stop).to_string())
    }

    fn max_concurrency(&self) -> usize {
        self.max_concurrency
    }
}
