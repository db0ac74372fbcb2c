//! Prediction strategies: decomposed prompting scored by label probability,
//! decomposed prompting with free generation, and the iterative baseline.

mod dump;
mod extract;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{argmax, BackendError, CandidateScore, CompletionBackend, GenerateParams};
use crate::corpus::{PosTag, Sentence};
use crate::exec::Executor;
use crate::prompt::{generate_prompts, IterativeTemplate, PromptError, PromptTemplate};

pub use dump::{read_predictions, read_timings, PredictionRecord, TimingRecord};
pub use extract::extract_tag;

/// Label used when a generation contains no tag.
pub const FALLBACK_TAG: PosTag = PosTag::X;

#[derive(Debug, Error)]
pub enum TaggerError {
    #[error("sentence {sentence}: {source}")]
    Backend {
        sentence: String,
        #[source]
        source: BackendError,
    },
    #[error(transparent)]
    Prompt(#[from] PromptError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    DecomProb,
    DecomGen,
    Iter,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::DecomProb => "decom_prob",
            Mode::DecomGen => "decom_gen",
            Mode::Iter => "iter",
        }
    }
}

/// Predicted labels for one sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub sentence_id: String,
    pub language: String,
    pub tokens: Vec<String>,
    pub gold: Option<Vec<PosTag>>,
    pub predicted: Vec<PosTag>,
    pub per_token_scores: Option<Vec<Vec<CandidateScore>>>,
    pub mode: Mode,
    /// Backend time only; prompt rendering is excluded.
    pub wall_time: Duration,
    pub request_count: usize,
    pub extraction_failures: usize,
}

impl Prediction {
    fn new(sentence: &Sentence, mode: Mode, predicted: Vec<PosTag>) -> Self {
        Prediction {
            sentence_id: sentence.source_id.clone(),
            language: sentence.language.clone(),
            tokens: sentence.surfaces().map(str::to_string).collect(),
            gold: sentence.gold_tags(),
            request_count: predicted.len(),
            predicted,
            per_token_scores: None,
            mode,
            wall_time: Duration::ZERO,
            extraction_failures: 0,
        }
    }
}

/// What to run over each sentence.
#[derive(Debug, Clone, Copy)]
pub enum Strategy<'a> {
    DecomProb {
        prefix: &'a str,
    },
    DecomGen {
        prefix: &'a str,
    },
    Iter {
        demos: &'a [Sentence],
        instruction: Option<&'a str>,
    },
}

impl Strategy<'_> {
    pub fn mode(&self) -> Mode {
        match self {
            Strategy::DecomProb { .. } => Mode::DecomProb,
            Strategy::DecomGen { .. } => Mode::DecomGen,
            Strategy::Iter { .. } => Mode::Iter,
        }
    }
}

pub struct Tagger<'a> {
    backend: &'a dyn CompletionBackend,
    exec: &'a Executor,
    template: PromptTemplate,
    iterative: IterativeTemplate,
    /// Generation budget for decomposed generation and iterative steps.
    pub gen_max_tokens: usize,
}

impl<'a> Tagger<'a> {
    pub fn new(backend: &'a dyn CompletionBackend, exec: &'a Executor) -> Self {
        Tagger {
            backend,
            exec,
            template: PromptTemplate::default(),
            iterative: IterativeTemplate::default(),
            gen_max_tokens: 8,
        }
    }

    pub fn with_templates(
        mut self,
        template: PromptTemplate,
        iterative: IterativeTemplate,
    ) -> Self {
        self.template = template;
        self.iterative = iterative;
        self
    }

    pub fn template(&self) -> &PromptTemplate {
        &self.template
    }

    fn backend_err(sentence: &Sentence) -> impl Fn(BackendError) -> TaggerError + '_ {
        move |source| TaggerError::Backend {
            sentence: sentence.source_id.clone(),
            source,
        }
    }

    /// `ŷ_i = argmax_l P(l | D ∘ T(X, x_i))` for every token, all prompts
    /// dispatched independently.
    pub fn tag_decomposed_prob(
        &self,
        sentence: &Sentence,
        prefix: &str,
    ) -> Result<Prediction, TaggerError> {
        let prompts = generate_prompts(&self.template, sentence, prefix).prompts;
        let started = Instant::now();
        let results = self.exec.map(&prompts, |prompt| {
            self.backend.score_candidates(prompt, &PosTag::ALL)
        });
        let wall_time = started.elapsed();

        let scores = results
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map_err(Self::backend_err(sentence))?;
        let predicted = scores
            .iter()
            .map(|s| argmax(s).expect("17 candidates"))
            .collect();
        let mut prediction = Prediction::new(sentence, Mode::DecomProb, predicted);
        prediction.per_token_scores = Some(scores);
        prediction.wall_time = wall_time;
        Ok(prediction)
    }

    /// Decomposed prompts answered by free generation; unparseable answers
    /// become [`FALLBACK_TAG`] and are counted.
    pub fn tag_decomposed_gen(
        &self,
        sentence: &Sentence,
        prefix: &str,
    ) -> Result<Prediction, TaggerError> {
        let prompts = generate_prompts(&self.template, sentence, prefix).prompts;
        let params = GenerateParams::greedy(self.gen_max_tokens, &["\n"]);
        let started = Instant::now();
        let results = self
            .exec
            .map(&prompts, |prompt| self.backend.generate(prompt, &params));
        let wall_time = started.elapsed();

        let texts = results
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map_err(Self::backend_err(sentence))?;
        let mut failures = 0;
        let predicted = texts
            .iter()
            .map(|text| {
                extract_tag(text).unwrap_or_else(|| {
                    failures += 1;
                    FALLBACK_TAG
                })
            })
            .collect();
        let mut prediction = Prediction::new(sentence, Mode::DecomGen, predicted);
        prediction.wall_time = wall_time;
        prediction.extraction_failures = failures;
        Ok(prediction)
    }

    /// Left-to-right baseline: step `t` sees the labels predicted for tokens
    /// `0..t`. Calls are strictly sequential.
    pub fn tag_iterative(
        &self,
        sentence: &Sentence,
        demos: &[Sentence],
        instruction: Option<&str>,
    ) -> Result<Prediction, TaggerError> {
        let params = GenerateParams::greedy(self.gen_max_tokens, &["\n"]);
        let mut predicted = Vec::with_capacity(sentence.len());
        let mut failures = 0;
        let mut wall_time = Duration::ZERO;
        for _ in 0..sentence.len() {
            let prompt = self
                .iterative
                .render(sentence, &predicted, demos, instruction)?;
            let started = Instant::now();
            let text = self
                .backend
                .generate(&prompt, &params)
                .map_err(Self::backend_err(sentence))?;
            wall_time += started.elapsed();
            let tag = extract_tag(extract::first_word(&text)).unwrap_or_else(|| {
                failures += 1;
                FALLBACK_TAG
            });
            predicted.push(tag);
        }
        let mut prediction = Prediction::new(sentence, Mode::Iter, predicted);
        prediction.wall_time = wall_time;
        prediction.extraction_failures = failures;
        Ok(prediction)
    }

    pub fn tag(
        &self,
        sentence: &Sentence,
        strategy: &Strategy<'_>,
    ) -> Result<Prediction, TaggerError> {
        match *strategy {
            Strategy::DecomProb { prefix } => self.tag_decomposed_prob(sentence, prefix),
            Strategy::DecomGen { prefix } => self.tag_decomposed_gen(sentence, prefix),
            Strategy::Iter { demos, instruction } => {
                self.tag_iterative(sentence, demos, instruction)
            }
        }
    }

    /// Tags every sentence; sentences are dispatched through the executor
    /// and results keep input order.
    pub fn tag_all(
        &self,
        sentences: &[Sentence],
        strategy: &Strategy<'_>,
    ) -> Vec<Result<Prediction, TaggerError>> {
        self.exec.map(sentences, |s| self.tag(s, strategy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{CallKind, MockBackend, MockTable};
    use crate::corpus::tagset_line;

    fn viel() -> Sentence {
        Sentence::from_text("de", "viel", "Viel Erfolg !").unwrap()
    }

    fn viel_mock() -> MockBackend {
        MockBackend::new(
            MockTable::default()
                .with_row("Viel", [(PosTag::Adj, -0.2), (PosTag::Det, -1.5)])
                .with_row("Erfolg", [(PosTag::Noun, -0.1), (PosTag::Propn, -0.9)])
                .with_row("!", [(PosTag::Punct, -0.01)]),
        )
    }

    #[test]
    fn decomposed_prob_takes_row_argmax() {
        let mock = viel_mock();
        let exec = Executor::sequential();
        let p = Tagger::new(&mock, &exec)
            .tag_decomposed_prob(&viel(), "")
            .unwrap();
        assert_eq!(p.predicted, vec![PosTag::Adj, PosTag::Noun, PosTag::Punct]);
        assert_eq!(p.request_count, 3);
        assert_eq!(p.per_token_scores.as_ref().unwrap().len(), 3);
        assert_eq!(mock.call_count(), 3);
    }

    #[test]
    fn single_token_sentence_makes_one_call() {
        let mock = viel_mock();
        let exec = Executor::sequential();
        let tagger = Tagger::new(&mock, &exec);
        let s = Sentence::from_text("de", "one", "!").unwrap();
        let p = tagger.tag_decomposed_prob(&s, "").unwrap();
        assert_eq!(p.predicted, vec![PosTag::Punct]);
        assert_eq!(mock.call_count(), 1);
        let p = tagger.tag_iterative(&s, &[], None).unwrap();
        assert_eq!(p.request_count, 1);
        assert_eq!(mock.call_count(), 2);
    }

    #[test]
    fn concurrent_and_sequential_agree() {
        let mock = viel_mock();
        let seq = Executor::sequential();
        let par = Executor::with_threads(4).unwrap();
        let a = Tagger::new(&mock, &seq)
            .tag_decomposed_prob(&viel(), "")
            .unwrap();
        let b = Tagger::new(&mock, &par)
            .tag_decomposed_prob(&viel(), "")
            .unwrap();
        assert_eq!(a.predicted, b.predicted);
        assert_eq!(a.per_token_scores, b.per_token_scores);
    }

    #[test]
    fn capability_error_surfaces_with_guidance() {
        let mock = viel_mock().without_scoring();
        let exec = Executor::sequential();
        let err = Tagger::new(&mock, &exec)
            .tag_decomposed_prob(&viel(), "")
            .unwrap_err();
        assert!(err.to_string().contains("--mode gen"), "{err}");
    }

    #[test]
    fn decomposed_gen_parses_generations() {
        let mock = MockBackend::new(
            MockTable::default()
                .with_transcript("'Viel' is a kind of", " NOUN.")
                .with_transcript("'Erfolg' is a kind of", " PROPN because it is a name")
                .with_transcript("'!' is a kind of", " I think it is a verb"),
        );
        let exec = Executor::sequential();
        let p = Tagger::new(&mock, &exec)
            .tag_decomposed_gen(&viel(), "")
            .unwrap();
        assert_eq!(p.predicted, vec![PosTag::Noun, PosTag::Propn, PosTag::X]);
        assert_eq!(p.extraction_failures, 1);
        assert_eq!(p.predicted.len(), 3);
    }

    #[test]
    fn iterative_replays_transcript_in_order() {
        let instruction = tagset_line();
        let mock = MockBackend::new(
            MockTable::default()
                .with_transcript("\nViel_", "ADJ Erfolg_NOUN")
                .with_transcript("Viel_ADJ Erfolg_", "NOUN !_PUNCT")
                .with_transcript("Erfolg_NOUN !_", "PUNCT\n"),
        );
        let exec = Executor::sequential();
        let p = Tagger::new(&mock, &exec)
            .tag_iterative(&viel(), &[], Some(&instruction))
            .unwrap();
        assert_eq!(p.predicted, vec![PosTag::Adj, PosTag::Noun, PosTag::Punct]);
        let calls = mock.calls();
        assert_eq!(calls.len(), 3);
        assert!(calls.iter().all(|c| c.kind == CallKind::Generate));
        assert_eq!(
            calls[0].prompt,
            format!("{instruction}\nSentence: Viel Erfolg !\nViel_")
        );
        assert!(calls[2].prompt.ends_with("Viel_ADJ Erfolg_NOUN !_"));
        for w in calls.windows(2) {
            assert!(w[1].started >= w[0].finished);
        }
    }

    #[test]
    fn iterative_feeds_back_parsed_tag_only() {
        let mock = MockBackend::new(
            MockTable::default()
                .with_transcript("\nViel_", "adjective maybe")
                .with_transcript("Viel_X Erfolg_", "NOUN.")
                .with_transcript("Erfolg_NOUN !_", "PUNCT"),
        );
        let exec = Executor::sequential();
        let p = Tagger::new(&mock, &exec)
            .tag_iterative(&viel(), &[], None)
            .unwrap();
        assert_eq!(p.predicted, vec![PosTag::X, PosTag::Noun, PosTag::Punct]);
        assert_eq!(p.extraction_failures, 1);
    }

    #[test]
    fn strategies_dispatch() {
        let mock = viel_mock();
        let exec = Executor::with_threads(3).unwrap();
        let tagger = Tagger::new(&mock, &exec);
        let sentences = vec![viel(), Sentence::from_text("de", "b", "Erfolg !").unwrap()];
        for strategy in [
            Strategy::DecomProb { prefix: "" },
            Strategy::DecomGen { prefix: "" },
            Strategy::Iter {
                demos: &[],
                instruction: None,
            },
        ] {
            let out: Vec<Prediction> = tagger
                .tag_all(&sentences, &strategy)
                .into_iter()
                .map(Result::unwrap)
                .collect();
            assert_eq!(
                out[0].predicted,
                vec![PosTag::Adj, PosTag::Noun, PosTag::Punct]
            );
            assert_eq!(out[1].predicted, vec![PosTag::Noun, PosTag::Punct]);
            assert!(out.iter().all(|p| p.mode == strategy.mode()));
        }
    }
}
