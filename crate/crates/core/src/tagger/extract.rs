use crate::corpus::PosTag;

/// First maximal alphabetic run of `text` that equals a tag name exactly.
///
/// Runs are compared case-sensitively, so `adjective` and `Noun` never match
/// and `PROPN` is never read as `PRON`.
pub fn extract_tag(text: &str) -> Option<PosTag> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|run| !run.is_empty())
        .find_map(|run| run.parse().ok())
}

/// The iterative step's answer: the first whitespace-delimited word after any
/// leading whitespace.
pub(crate) fn first_word(text: &str) -> &str {
    text.split_whitespace().next().unwrap_or("")
}
