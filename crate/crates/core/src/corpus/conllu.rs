use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{CorpusError, PosTag, Sentence};

/// How the UPOS placeholder `_` is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UposPolicy {
    /// Evaluation sets: every token must carry a tag.
    #[default]
    Strict,
    /// Demonstration mining: `_` is accepted and leaves the tag absent.
    AllowMissing,
}

struct Block {
    start_line: usize,
    sent_id: Option<String>,
    tokens: Vec<(String, Option<PosTag>)>,
}

/// Parses CoNLL-U from a reader. `language` is attached to every sentence;
/// sentence ids come from `# sent_id = ...` comments when present.
pub fn parse_conllu<R: BufRead>(
    reader: R,
    language: &str,
    policy: UposPolicy,
) -> Result<Vec<Sentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut block: Option<Block> = None;

    let finish = |block: Block, out: &mut Vec<Sentence>| -> Result<(), CorpusError> {
        if block.tokens.is_empty() {
            // comment-only blocks (e.g. `# newdoc`) carry no sentence
            return Ok(());
        }
        let id = block
            .sent_id
            .unwrap_or_else(|| format!("{language}-{}", out.len() + 1));
        let sentence =
            Sentence::new(language, &id, block.tokens).map_err(|e| CorpusError::Parse {
                line: block.start_line,
                message: e.to_string(),
            })?;
        out.push(sentence);
        Ok(())
    };

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let line = if line_no == 1 {
            line.trim_start_matches('\u{feff}')
        } else {
            line
        };

        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                finish(b, &mut sentences)?;
            }
            continue;
        }

        let current = block.get_or_insert_with(|| Block {
            start_line: line_no,
            sent_id: None,
            tokens: Vec::new(),
        });

        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    current.sent_id = Some(value.trim().to_string());
                }
            }
            continue;
        }

        let columns: Vec<&str> = line.split('\t').collect();
        if columns.len() != 10 {
            return Err(CorpusError::Parse {
                line: line_no,
                message: format!("expected 10 tab-separated columns, found {}", columns.len()),
            });
        }
        let id = columns[0];
        if id.contains('-') || id.contains('.') {
            // multiword token ranges and empty nodes carry no UPOS of their own
            continue;
        }
        if id.parse::<usize>().is_err() {
            return Err(CorpusError::Parse {
                line: line_no,
                message: format!("invalid token id `{id}`"),
            });
        }
        let upos = columns[3];
        let tag = match (upos, policy) {
            ("_", UposPolicy::AllowMissing) => None,
            ("_", UposPolicy::Strict) => {
                return Err(CorpusError::Parse {
                    line: line_no,
                    message: "missing UPOS `_` in an evaluation set".to_string(),
                })
            }
            (other, _) => Some(other.parse::<PosTag>().map_err(|e| CorpusError::Parse {
                line: line_no,
                message: e.to_string(),
            })?),
        };
        current.tokens.push((columns[1].to_string(), tag));
    }

    if let Some(b) = block.take() {
        finish(b, &mut sentences)?;
    }
    Ok(sentences)
}

pub fn parse_conllu_str(
    input: &str,
    language: &str,
    policy: UposPolicy,
) -> Result<Vec<Sentence>, CorpusError> {
    parse_conllu(input.as_bytes(), language, policy)
}

pub fn read_conllu_file(
    path: &Path,
    language: &str,
    policy: UposPolicy,
) -> Result<Vec<Sentence>, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_conllu(BufReader::new(file), language, policy)
}

/// Serializes sentences with ID, FORM and UPOS populated and `_` elsewhere.
pub fn write_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        out.push_str("# sent_id = ");
        out.push_str(&sentence.source_id);
        out.push('\n');
        for token in sentence.tokens() {
            let upos = token.gold_tag.map(|t| t.as_str()).unwrap_or("_");
            out.push_str(&format!(
                "{}\t{}\t_\t{}\t_\t_\t_\t_\t_\t_\n",
                token.index + 1,
                token.surface,
                upos
            ));
        }
        out.push('\n');
    }
    out
}
