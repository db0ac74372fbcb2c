use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DemoTriple, PromptError};
use crate::corpus::{sample_indices, PosTag, Sentence};

/// Demonstration order of the reference few-shot decomposed prompt. For
/// `k < 17` the first `k` tags of this order are used.
pub const DEFAULT_DEMO_ORDER: [PosTag; 17] = [
    PosTag::Sconj,
    PosTag::Adj,
    PosTag::Noun,
    PosTag::Adp,
    PosTag::Aux,
    PosTag::Det,
    PosTag::Adv,
    PosTag::Verb,
    PosTag::Punct,
    PosTag::Cconj,
    PosTag::X,
    PosTag::Pron,
    PosTag::Part,
    PosTag::Propn,
    PosTag::Num,
    PosTag::Intj,
    PosTag::Sym,
];

/// Draws one `(C, c, l)` example per tag in `order` from `train`.
///
/// Candidates for a tag are all training tokens with that gold tag. Tags are
/// drawn in canonical order from a single seeded stream so the example chosen
/// for one tag does not depend on `order`; the result follows `order`.
pub fn select_fewshot_examples(
    train: &[Sentence],
    seed: u64,
    order: &[PosTag],
) -> Result<Vec<DemoTriple>, PromptError> {
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); PosTag::COUNT];
    for (s, sentence) in train.iter().enumerate() {
        for token in sentence.tokens() {
            if let Some(tag) = token.gold_tag {
                occurrences[tag.index()].push((s, token.index));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<Option<(usize, usize)>> = vec![None; PosTag::COUNT];
    for tag in PosTag::ALL {
        let pool = &occurrences[tag.index()];
        if !pool.is_empty() {
            chosen[tag.index()] = Some(pool[rng.gen_range(0..pool.len())]);
        }
    }

    order
        .iter()
        .map(|&tag| {
            let (s, t) = chosen[tag.index()].ok_or(PromptError::UnsatisfiableTag(tag))?;
            let context = train[s].clone();
            let token = context.tokens()[t].surface.clone();
            Ok(DemoTriple::new(context, token, tag))
        })
        .collect()
}

/// Draws `k` fully tagged training sentences for the iterative baseline.
pub fn select_iterative_demos(
    train: &[Sentence],
    k: usize,
    seed: u64,
) -> Result<Vec<Sentence>, PromptError> {
    let tagged: Vec<&Sentence> = train.iter().filter(|s| s.is_fully_tagged()).collect();
    if tagged.len() < k {
        return Err(PromptError::NotEnoughDemos {
            requested: k,
            available: tagged.len(),
        });
    }
    Ok(sample_indices(tagged.len(), k, seed)
        .into_iter()
        .map(|i| tagged[i].clone())
        .collect())
}
