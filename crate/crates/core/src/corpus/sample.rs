use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Sentence;

/// Identifier of the sampling procedure, recorded in run metadata.
///
/// ChaCha8 seeded through `seed_from_u64`, partial Fisher-Yates over the
/// index range, selected indices returned in ascending order.
pub const SAMPLER_ALGORITHM: &str = "chacha8-partial-fisher-yates-v1";

/// Indices of `n` elements drawn without replacement from `0..len`, in
/// ascending order. Returns the full range when `len <= n`.
pub fn sample_indices(len: usize, n: usize, seed: u64) -> Vec<usize> {
    if len <= n {
        return (0..len).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..len).collect();
    for i in 0..n {
        let j = rng.gen_range(i..len);
        pool.swap(i, j);
    }
    let mut picked = pool[..n].to_vec();
    picked.sort_unstable();
    picked
}

pub fn sample_instances(corpus: &[Sentence], n: usize, seed: u64) -> Vec<Sentence> {
    sample_indices(corpus.len(), n, seed)
        .into_iter()
        .map(|i| corpus[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn corpus(n: usize) -> Vec<Sentence> {
        (0..n)
            .map(|i| Sentence::from_text("en", &format!("s{i}"), &format!("word{i} .")).unwrap())
            .collect()
    }

    #[test]
    fn small_corpus_is_returned_whole() {
        let c = corpus(5);
        assert_eq!(sample_instances(&c, 10, 1), c);
        assert_eq!(sample_instances(&c, 5, 1), c);
    }

    #[test]
    fn same_seed_same_sample() {
        let c = corpus(1000);
        let a = sample_instances(&c, 200, 7);
        let b = sample_instances(&c, 200, 7);
        assert_eq!(a.len(), 200);
        assert_eq!(a, b);
    }

    #[test]
    fn different_seed_different_sample() {
        let c = corpus(1000);
        assert_ne!(sample_instances(&c, 200, 7), sample_instances(&c, 200, 8));
    }

    #[test]
    fn zero_draws() {
        assert!(sample_instances(&corpus(3), 0, 42).is_empty());
    }

    proptest! {
        #[test]
        fn sample_is_sorted_distinct_subset(len in 0usize..300, n in 0usize..300, seed: u64) {
            let idx = sample_indices(len, n, seed);
            prop_assert_eq!(idx.len(), len.min(n));
            prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(idx.iter().all(|&i| i < len));
            prop_assert_eq!(idx.clone(), sample_indices(len, n, seed));
        }
    }
}
