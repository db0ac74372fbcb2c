//! Decomposed prompting for sequence labeling.
//!
//! The harness turns a tokenized sentence into one prompt per token, asks a
//! completion backend for the label of each token independently, and compares
//! the outcome against the iterative (left-to-right) prompting baseline on
//! Universal Dependencies part-of-speech data.
//!
//! Module map:
//!
//! * [`corpus`]: CoNLL-U parsing, seeded sampling, language metadata.
//! * [`prompt`]: byte-exact prompt rendering for both strategies.
//! * [`backend`]: the model interface, a deterministic mock and an HTTP client.
//! * [`tagger`]: the three prediction strategies.
//! * [`metrics`]: weighted F1, aggregation and speedup.
//! * [`analysis`]: typological similarity to English and grouped reports.
//! * [`cli`]: command orchestration used by the `seqprobe` binary.

pub mod analysis;
pub mod backend;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod metrics;
pub mod prompt;
pub mod tagger;

pub use corpus::{PosTag, Sentence, Token};
pub use error::{Error, Result};
pub use exec::Executor;
