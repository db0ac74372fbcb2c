use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::backend::BackendConfig;
use crate::corpus::{PosTag, EVALUATION_LANGUAGES};
use crate::tagger::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Decom,
    Iter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMode {
    Prob,
    Gen,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Decom => "decom",
            Method::Iter => "iter",
        }
    }
}

impl DecodeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeMode::Prob => "prob",
            DecodeMode::Gen => "gen",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "decom" => Ok(Method::Decom),
            "iter" => Ok(Method::Iter),
            other => Err(format!("unknown method `{other}` (expected decom or iter)")),
        }
    }
}

impl FromStr for DecodeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prob" => Ok(DecodeMode::Prob),
            "gen" => Ok(DecodeMode::Gen),
            other => Err(format!("unknown mode `{other}` (expected prob or gen)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for DecodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_shots() -> usize {
    PosTag::COUNT
}

fn default_languages() -> Vec<String> {
    EVALUATION_LANGUAGES.iter().map(|s| s.to_string()).collect()
}

fn default_sample_size() -> usize {
    200
}

fn default_seed() -> u64 {
    42
}

fn default_corpus_dir() -> PathBuf {
    PathBuf::from("data/ud")
}

fn default_demos() -> PathBuf {
    PathBuf::from("data/ud/train_en.conllu")
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// One evaluation run. Loaded from TOML; command-line flags override the
/// file field by field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub method: Method,
    /// Unset means `prob` for decom and `gen` for iter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DecodeMode>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    /// Unset means on for zero-shot and off for few-shot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_instruction: Option<bool>,
    #[serde(default = "default_languages")]
    pub languages: Vec<String>,
    #[serde(default = "default_sample_size")]
    pub sample_size: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Directory holding `<language>.conllu` test files.
    #[serde(default = "default_corpus_dir")]
    pub corpus_dir: PathBuf,
    /// English training file the demonstrations are drawn from.
    #[serde(default = "default_demos")]
    pub demos: PathBuf,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub backend: BackendConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Decom,
            mode: None,
            shots: default_shots(),
            with_instruction: None,
            languages: default_languages(),
            sample_size: default_sample_size(),
            seed: default_seed(),
            corpus_dir: default_corpus_dir(),
            demos: default_demos(),
            output: default_output(),
            backend: BackendConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("RunConfig serializes to TOML")
    }

    pub fn mode(&self) -> DecodeMode {
        self.mode.unwrap_or(match self.method {
            Method::Decom => DecodeMode::Prob,
            Method::Iter => DecodeMode::Gen,
        })
    }

    pub fn with_instruction(&self) -> bool {
        self.with_instruction.unwrap_or(self.shots == 0)
    }

    pub fn tagger_mode(&self) -> Mode {
        match (self.method, self.mode()) {
            (Method::Iter, _) => Mode::Iter,
            (Method::Decom, DecodeMode::Prob) => Mode::DecomProb,
            (Method::Decom, DecodeMode::Gen) => Mode::DecomGen,
        }
    }

    /// Directory name of this run: `<method>_<mode>_k<shots>_<inst|noinst>`.
    pub fn run_name(&self) -> String {
        format!(
            "{}_{}_k{}_{}",
            self.method,
            self.mode(),
            self.shots,
            if self.with_instruction() {
                "inst"
            } else {
                "noinst"
            }
        )
    }

    pub fn run_dir(&self) -> PathBuf {
        self.output.join(self.run_name())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.method == Method::Iter && self.mode() == DecodeMode::Prob {
            return Err(ConfigError::Invalid(
                "mode prob scores labels of independent prompts and is only defined for method decom; \
                 use --mode gen with --method iter"
                    .into(),
            ));
        }
        if self.shots == 0 && self.with_instruction == Some(false) {
            return Err(ConfigError::Invalid(
                "zero-shot prompts always carry the task instruction".into(),
            ));
        }
        if self.method == Method::Decom && self.shots > PosTag::COUNT {
            return Err(ConfigError::Invalid(format!(
                "decomposed few-shot uses at most one demonstration per tag ({} shots)",
                PosTag::COUNT
            )));
        }
        if self.languages.is_empty() {
            return Err(ConfigError::Invalid("no languages selected".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for lang in &self.languages {
            if lang.is_empty() || lang.contains(['/', '\\', '.']) {
                return Err(ConfigError::Invalid(format!(
                    "invalid language code `{lang}`"
                )));
            }
            if !seen.insert(lang) {
                return Err(ConfigError::Invalid(format!(
                    "language `{lang}` listed twice"
                )));
            }
        }
        if self.sample_size == 0 {
            return Err(ConfigError::Invalid(
                "sample_size must be at least 1".into(),
            ));
        }
        self.backend
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}
