use serde::{Deserialize, Serialize};

use super::PromptError;
use crate::corpus::{PosTag, Sentence};

/// How the queried token is quoted inside the question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuoteStyle {
    /// `'x'`
    #[default]
    Ascii,
    /// `` `x' ``, as typeset in print.
    Typeset,
}

impl QuoteStyle {
    fn quote(self, token: &str) -> String {
        match self {
            QuoteStyle::Ascii => format!("'{token}'"),
            QuoteStyle::Typeset => format!("`{token}'"),
        }
    }
}

/// Handling of surface forms that occur more than once in a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DuplicateMode {
    /// Name the token by its surface only; repeated words share one query.
    #[default]
    SurfaceOnly,
    /// Not the reference prompt: repeated words get an ` (occurrence N)`
    /// suffix after the quoted token.
    OccurrenceIndex,
}

const QUERY_END: &str = "is a kind of";

/// The per-token template `T`.
///
/// Patterns use the slots `{sentence}`, `{token}` and (demo only) `{label}`.
/// `{token}` receives the already quoted token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PromptTemplate {
    pub query_pattern: String,
    pub demo_pattern: String,
    /// Appended after the instruction and after every demonstration.
    pub segment_separator: String,
    pub quote: QuoteStyle,
    pub duplicates: DuplicateMode,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            query_pattern:
                "Sentence: {sentence}\nIn the sentence, the part-of-speech tag of {token} is a kind of"
                    .to_string(),
            demo_pattern:
                "Sentence: {sentence}\nIn the sentence, the part-of-speech tag of {token} is a kind of {label}."
                    .to_string(),
            segment_separator: "\n".to_string(),
            quote: QuoteStyle::Ascii,
            duplicates: DuplicateMode::SurfaceOnly,
        }
    }
}

impl PromptTemplate {
    /// Checks the structural requirements that downstream scoring relies on.
    pub fn validate(&self) -> Result<(), PromptError> {
        let invalid = |m: &str| Err(PromptError::InvalidTemplate(m.to_string()));
        if !self.query_pattern.ends_with(QUERY_END) {
            return invalid("query pattern must end with `is a kind of`");
        }
        if !self.demo_pattern.ends_with("{label}.") {
            return invalid("demo pattern must end with `{label}.`");
        }
        for (name, pattern) in [("query", &self.query_pattern), ("demo", &self.demo_pattern)] {
            if !pattern.contains("{token}") {
                return Err(PromptError::InvalidTemplate(format!(
                    "{name} pattern lacks the {{token}} slot"
                )));
            }
        }
        Ok(())
    }

    fn token_slot(&self, sentence: &Sentence, index: usize) -> String {
        let surface = &sentence.tokens()[index].surface;
        let quoted = self.quote.quote(surface);
        match self.duplicates {
            DuplicateMode::SurfaceOnly => quoted,
            DuplicateMode::OccurrenceIndex => {
                let occurrences = sentence.surfaces().filter(|s| s == surface).count();
                if occurrences < 2 {
                    return quoted;
                }
                let nth = sentence.tokens()[..=index]
                    .iter()
                    .filter(|t| &t.surface == surface)
                    .count();
                format!("{quoted} (occurrence {nth})")
            }
        }
    }

    /// `T(X, x_i)`: ends exactly with `is a kind of`.
    pub fn render_query(&self, sentence: &Sentence, index: usize) -> Result<String, PromptError> {
        if index >= sentence.len() {
            return Err(PromptError::IndexOutOfRange {
                index,
                len: sentence.len(),
            });
        }
        let text = sentence.text();
        let token = self.token_slot(sentence, index);
        Ok(fill(
            &self.query_pattern,
            &[("sentence", &text), ("token", &token)],
        ))
    }

    /// `T(C, c, l)`: the query completed with ` L.`. Uses the first
    /// occurrence of `token` in `context`.
    pub fn render_demo(
        &self,
        context: &Sentence,
        token: &str,
        label: PosTag,
    ) -> Result<String, PromptError> {
        let index = context
            .position_of(token)
            .ok_or_else(|| PromptError::TokenNotInContext {
                token: token.to_string(),
                context: context.text(),
            })?;
        let text = context.text();
        let token = self.token_slot(context, index);
        Ok(fill(
            &self.demo_pattern,
            &[
                ("sentence", &text),
                ("token", &token),
                ("label", label.as_str()),
            ],
        ))
    }
}

/// Single-pass slot substitution; substituted text is never rescanned.
fn fill(pattern: &str, slots: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(pattern.len() + 64);
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let replaced = after.find('}').and_then(|close| {
            let name = &after[..close];
            slots
                .iter()
                .find(|(slot, _)| *slot == name)
                .map(|(_, value)| (value, close))
        });
        match replaced {
            Some((value, close)) => {
                out.push_str(value);
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    out
}
