use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// The 38 evaluation languages (ISO 639-1), English first.
pub const EVALUATION_LANGUAGES: [&str; 38] = [
    "en", "af", "ar", "bg", "de", "el", "es", "et", "eu", "fa", "fi", "fr", "he", "hi", "hu", "id",
    "it", "ja", "kk", "ko", "lt", "mr", "nl", "pl", "pt", "ro", "ru", "ta", "te", "th", "tl", "tr",
    "uk", "ur", "vi", "wo", "yo", "zh",
];

/// Default language subset of the few-shot ablation.
pub const ABLATION_LANGUAGES: [&str; 8] = ["en", "de", "el", "fa", "hi", "nl", "ru", "zh"];

const ISO_639_3: [(&str, &str); 38] = [
    ("af", "afr"),
    ("ar", "ara"),
    ("bg", "bul"),
    ("de", "deu"),
    ("el", "ell"),
    ("en", "eng"),
    ("es", "spa"),
    ("et", "est"),
    ("eu", "eus"),
    ("fa", "fas"),
    ("fi", "fin"),
    ("fr", "fra"),
    ("he", "heb"),
    ("hi", "hin"),
    ("hu", "hun"),
    ("id", "ind"),
    ("it", "ita"),
    ("ja", "jpn"),
    ("kk", "kaz"),
    ("ko", "kor"),
    ("lt", "lit"),
    ("mr", "mar"),
    ("nl", "nld"),
    ("pl", "pol"),
    ("pt", "por"),
    ("ro", "ron"),
    ("ru", "rus"),
    ("ta", "tam"),
    ("te", "tel"),
    ("th", "tha"),
    ("tl", "tgl"),
    ("tr", "tur"),
    ("uk", "ukr"),
    ("ur", "urd"),
    ("vi", "vie"),
    ("wo", "wol"),
    ("yo", "yor"),
    ("zh", "zho"),
];

/// Three-letter code used by the typology vectors for a two-letter code.
pub fn iso639_3(code: &str) -> Option<&'static str> {
    ISO_639_3
        .iter()
        .find(|(two, _)| *two == code)
        .map(|(_, three)| *three)
}

/// Pretraining-corpus share: `Low` is below 0.005% of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShareClass {
    High,
    Low,
}

impl FromStr for ShareClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "High" | "H" => Ok(ShareClass::High),
            "Low" | "L" => Ok(ShareClass::Low),
            other => Err(format!("invalid corpus share class `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageMeta {
    pub code: String,
    pub family: String,
    /// Latin or Cyrillic script.
    pub script_known: bool,
    pub corpus_share_class: ShareClass,
}

impl LanguageMeta {
    pub fn is_indo_european(&self) -> bool {
        self.family == "Indo-European"
    }
}

#[derive(Debug, Clone, Default)]
pub struct LanguageTable {
    by_code: BTreeMap<String, LanguageMeta>,
}

impl LanguageTable {
    pub fn get(&self, code: &str) -> Result<&LanguageMeta, CorpusError> {
        self.by_code
            .get(code)
            .ok_or_else(|| CorpusError::UnknownLanguage(code.to_string()))
    }

    pub fn len(&self) -> usize {
        self.by_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_code.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LanguageMeta> {
        self.by_code.values()
    }
}

/// Parses the tab-separated metadata file: `code family script_known
/// corpus_share_class`, one language per line. `#` lines and a header line
/// starting with `code` are ignored.
pub fn parse_language_meta(text: &str) -> Result<LanguageTable, CorpusError> {
    let mut by_code = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') || line.starts_with("code\t") {
            continue;
        }
        let parse_err = |message: String| CorpusError::Parse {
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(parse_err(format!(
                "expected 4 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let script_known = match cols[2] {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => return Err(parse_err(format!("invalid script_known `{other}`"))),
        };
        let meta = LanguageMeta {
            code: cols[0].to_string(),
            family: cols[1].to_string(),
            script_known,
            corpus_share_class: cols[3].parse().map_err(parse_err)?,
        };
        by_code.insert(meta.code.clone(), meta);
    }
    let missing: Vec<&str> = EVALUATION_LANGUAGES
        .iter()
        .copied()
        .filter(|c| !by_code.contains_key(*c))
        .collect();
    if !missing.is_empty() {
        return Err(CorpusError::MissingLanguages(missing.join(", ")));
    }
    Ok(LanguageTable { by_code })
}

pub fn load_language_meta(path: &Path) -> Result<LanguageTable, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_language_meta(&text)
}
