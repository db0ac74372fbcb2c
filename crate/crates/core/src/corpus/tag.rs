use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Universal part-of-speech tag.
///
/// Variant order is the canonical (alphabetical) order of the tag set and is
/// used for deterministic tie-breaking everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "&'static str")]
pub enum PosTag {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl PosTag {
    pub const COUNT: usize = 17;

    pub const ALL: [PosTag; Self::COUNT] = [
        PosTag::Adj,
        PosTag::Adp,
        PosTag::Adv,
        PosTag::Aux,
        PosTag::Cconj,
        PosTag::Det,
        PosTag::Intj,
        PosTag::Noun,
        PosTag::Num,
        PosTag::Part,
        PosTag::Pron,
        PosTag::Propn,
        PosTag::Punct,
        PosTag::Sconj,
        PosTag::Sym,
        PosTag::Verb,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Adj => "ADJ",
            PosTag::Adp => "ADP",
            PosTag::Adv => "ADV",
            PosTag::Aux => "AUX",
            PosTag::Cconj => "CCONJ",
            PosTag::Det => "DET",
            PosTag::Intj => "INTJ",
            PosTag::Noun => "NOUN",
            PosTag::Num => "NUM",
            PosTag::Part => "PART",
            PosTag::Pron => "PRON",
            PosTag::Propn => "PROPN",
            PosTag::Punct => "PUNCT",
            PosTag::Sconj => "SCONJ",
            PosTag::Sym => "SYM",
            PosTag::Verb => "VERB",
            PosTag::X => "X",
        }
    }

    /// Position in the canonical order, `0..17`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<PosTag> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| CorpusError::UnknownTag(s.to_string()))
    }
}

impl TryFrom<String> for PosTag {
    type Error = CorpusError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<PosTag> for &'static str {
    fn from(tag: PosTag) -> Self {
        tag.as_str()
    }
}

/// The tag-set instruction line, listing every tag in canonical order.
pub fn tagset_line() -> String {
    let tags: Vec<&str> = PosTag::ALL.iter().map(|t| t.as_str()).collect();
    format!("POS tag set: {}", tags.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_distinct_tags_in_alphabetical_order() {
        let names: Vec<&str> = PosTag::ALL.iter().map(|t| t.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names, sorted);
        assert_eq!(names.len(), 17);
    }

    #[test]
    fn parse_roundtrip_and_rejects_unknown() {
        for tag in PosTag::ALL {
            assert_eq!(tag.as_str().parse::<PosTag>().unwrap(), tag);
            assert_eq!(PosTag::from_index(tag.index()), Some(tag));
        }
        assert!("noun".parse::<PosTag>().is_err());
        assert!("_".parse::<PosTag>().is_err());
        assert!("PRO".parse::<PosTag>().is_err());
    }

    #[test]
    fn tagset_instruction_text() {
        assert_eq!(
            tagset_line(),
            "POS tag set: ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X"
        );
    }

    #[test]
    fn serde_uses_upos_names() {
        let json = serde_json::to_string(&vec![PosTag::Propn, PosTag::X]).unwrap();
        assert_eq!(json, r#"["PROPN","X"]"#);
        let back: Vec<PosTag> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![PosTag::Propn, PosTag::X]);
        assert!(serde_json::from_str::<PosTag>(r#""NOPE""#).is_err());
    }
}
