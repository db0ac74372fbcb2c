//! Prompt rendering.
//!
//! Decomposed prompting builds one prompt per token: an optional instruction,
//! `k` rendered demonstrations, then the query for token `i`. The iterative
//! baseline instead renders the whole sentence with the labels predicted so
//! far and asks for the next one.

mod fewshot;
mod iterative;
mod template;

use thiserror::Error;

use crate::corpus::{PosTag, Sentence};

pub use fewshot::{select_fewshot_examples, select_iterative_demos, DEFAULT_DEMO_ORDER};
pub use iterative::{render_iterative, IterativeTemplate};
pub use template::{DuplicateMode, PromptTemplate, QuoteStyle};

#[derive(Debug, Error, PartialEq)]
pub enum PromptError {
    #[error("token index {index} out of range for a sentence of {len} tokens")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("token `{token}` does not occur in context sentence `{context}`")]
    TokenNotInContext { token: String, context: String },
    #[error("no training token carries the tag {0}")]
    UnsatisfiableTag(PosTag),
    #[error(
        "predicted prefix of {prefix} tags leaves nothing to decode in a sentence of {len} tokens"
    )]
    PrefixTooLong { prefix: usize, len: usize },
    #[error("demonstration sentence `{0}` is not fully tagged")]
    UntaggedDemo(String),
    #[error("requested {requested} demonstrations but only {available} are available")]
    NotEnoughDemos { requested: usize, available: usize },
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
}

/// A demonstration `(C, c, l)`: context sentence, a token in it, its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoTriple {
    pub context: Sentence,
    pub token: String,
    pub label: PosTag,
}

impl DemoTriple {
    pub fn new(context: Sentence, token: impl Into<String>, label: PosTag) -> Self {
        DemoTriple {
            context,
            token: token.into(),
            label,
        }
    }
}

/// Instruction plus demonstrations, rendered into the shared prefix `D`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DemonstrationSet {
    pub instruction: Option<String>,
    pub triples: Vec<DemoTriple>,
}

impl DemonstrationSet {
    pub fn zero_shot(instruction: Option<String>) -> Self {
        DemonstrationSet {
            instruction,
            triples: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.triples.len()
    }

    pub fn render(&self, template: &PromptTemplate) -> Result<String, PromptError> {
        build_demonstrations(template, &self.triples, self.instruction.as_deref())
    }
}

/// The per-token prompts of one sentence, in token order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    pub prompts: Vec<String>,
    pub sentence_id: String,
}

/// `D = I ∘ T(C_1, c_1, l_1) ∘ ... ∘ T(C_k, c_k, l_k)`, each segment followed
/// by the template's segment separator.
pub fn build_demonstrations(
    template: &PromptTemplate,
    triples: &[DemoTriple],
    instruction: Option<&str>,
) -> Result<String, PromptError> {
    let mut out = String::new();
    if let Some(instruction) = instruction {
        out.push_str(instruction);
        out.push_str(&template.segment_separator);
    }
    for triple in triples {
        out.push_str(&template.render_demo(&triple.context, &triple.token, triple.label)?);
        out.push_str(&template.segment_separator);
    }
    Ok(out)
}

/// `G(X, D)`: one independent prompt `D ∘ T(X, x_i)` per token.
pub fn generate_prompts(template: &PromptTemplate, sentence: &Sentence, prefix: &str) -> PromptSet {
    let prompts = (0..sentence.len())
        .map(|i| {
            let query = template
                .render_query(sentence, i)
                .expect("index within sentence length");
            format!("{prefix}{query}")
        })
        .collect();
    PromptSet {
        prompts,
        sentence_id: sentence.source_id.clone(),
    }
}
