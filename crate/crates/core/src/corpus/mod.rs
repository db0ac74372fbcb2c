//! Universal Dependencies data: tags, sentences, CoNLL-U I/O, sampling and
//! language metadata.

mod conllu;
mod lang;
mod sample;
mod tag;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use conllu::{parse_conllu, parse_conllu_str, read_conllu_file, write_conllu, UposPolicy};
pub use lang::{
    iso639_3, load_language_meta, parse_language_meta, LanguageMeta, LanguageTable, ShareClass,
    ABLATION_LANGUAGES, EVALUATION_LANGUAGES,
};
pub use sample::{sample_indices, sample_instances, SAMPLER_ALGORITHM};
pub use tag::{tagset_line, PosTag};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown POS tag `{0}`")]
    UnknownTag(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid token surface {0:?}: must be non-empty without line breaks or tabs")]
    InvalidSurface(String),
    #[error("a sentence needs at least one token")]
    EmptySentence,
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("language metadata is missing evaluation languages: {0}")]
    MissingLanguages(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One gold-tokenized word of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub gold_tag: Option<PosTag>,
    pub index: usize,
}

/// A gold-tokenized sentence. Tokens are never re-tokenized by the harness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    tokens: Vec<Token>,
    pub language: String,
    pub source_id: String,
}

impl Sentence {
    pub fn new<S, I>(language: &str, source_id: &str, tokens: I) -> Result<Self, CorpusError>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, Option<PosTag>)>,
    {
        let tokens = tokens
            .into_iter()
            .enumerate()
            .map(|(index, (surface, gold_tag))| {
                let surface = surface.into();
                if surface.is_empty() || surface.contains(['\n', '\r', '\t']) {
                    return Err(CorpusError::InvalidSurface(surface));
                }
                Ok(Token {
                    surface,
                    gold_tag,
                    index,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        Ok(Sentence {
            tokens,
            language: language.to_string(),
            source_id: source_id.to_string(),
        })
    }

    /// Whitespace-split convenience constructor without gold tags.
    pub fn from_text(language: &str, source_id: &str, text: &str) -> Result<Self, CorpusError> {
        Self::new(
            language,
            source_id,
            text.split_whitespace().map(|w| (w, None)),
        )
    }

    /// Builds a fully tagged sentence from `(surface, tag)` pairs.
    pub fn tagged<'a, I>(language: &str, source_id: &str, pairs: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (&'a str, PosTag)>,
    {
        Self::new(
            language,
            source_id,
            pairs.into_iter().map(|(s, t)| (s, Some(t))),
        )
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Surfaces joined by single spaces.
    pub fn text(&self) -> String {
        self.surfaces().collect::<Vec<_>>().join(" ")
    }

    /// Gold tags, if every token carries one.
    pub fn gold_tags(&self) -> Option<Vec<PosTag>> {
        self.tokens.iter().map(|t| t.gold_tag).collect()
    }

    pub fn is_fully_tagged(&self) -> bool {
        self.tokens.iter().all(|t| t.gold_tag.is_some())
    }

    /// Index of the first token whose surface equals `surface`.
    pub fn position_of(&self, surface: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t.surface == surface)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentence_indices_are_contiguous() {
        let s = Sentence::from_text("de", "s1", "Viel Erfolg !").unwrap();
        assert_eq!(s.len(), 3);
        for (i, t) in s.tokens().iter().enumerate() {
            assert_eq!(t.index, i);
        }
        assert_eq!(s.text(), "Viel Erfolg !");
        assert_eq!(s.gold_tags(), None);
    }

    #[test]
    fn rejects_empty_and_bad_surfaces() {
        assert!(matches!(
            Sentence::from_text("en", "x", "   "),
            Err(CorpusError::EmptySentence)
        ));
        assert!(matches!(
            Sentence::new("en", "x", [("a\nb", None)]),
            Err(CorpusError::InvalidSurface(_))
        ));
        assert!(matches!(
            Sentence::new("en", "x", [("", None)]),
            Err(CorpusError::InvalidSurface(_))
        ));
    }

    #[test]
    fn first_occurrence_lookup() {
        let s = Sentence::from_text("en", "x", "the cat saw the dog").unwrap();
        assert_eq!(s.position_of("the"), Some(0));
        assert_eq!(s.position_of("dog"), Some(4));
        assert_eq!(s.position_of("bird"), None);
    }
}
