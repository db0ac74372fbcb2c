use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use seqprobe::backend::{MockBackend, MockTable};
use seqprobe::corpus::tagset_line;
use seqprobe::tagger::Tagger;
use seqprobe::{Executor, Sentence};

// Per-call latency stands in for network round trips.
const LATENCY: Duration = Duration::from_millis(1);

fn sentence(len: usize) -> Sentence {
    let words: Vec<String> = (0..len).map(|i| format!("tok{i}")).collect();
    Sentence::from_text("en", "bench", &words.join(" ")).unwrap()
}

fn decomposed(c: &mut Criterion) {
    let backend = MockBackend::new(MockTable::bundled()).with_latency(LATENCY);
    let prefix = tagset_line() + "\n";
    let mut group = c.benchmark_group("decomposed_dispatch");
    group.sample_size(10);
    for len in [8, 16, 32] {
        let s = sentence(len);
        let sequential = Executor::sequential();
        group.bench_with_input(BenchmarkId::new("sequential", len), &s, |b, s| {
            let tagger = Tagger::new(&backend, &sequential);
            b.iter(|| black_box(tagger.tag_decomposed_prob(s, &prefix).unwrap()))
        });
        if let Ok(parallel) = Executor::with_threads(16) {
            if parallel.is_parallel() {
                group.bench_with_input(BenchmarkId::new("parallel16", len), &s, |b, s| {
                    let tagger = Tagger::new(&backend, &parallel);
                    b.iter(|| black_box(tagger.tag_decomposed_prob(s, &prefix).unwrap()))
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, decomposed);
criterion_main!(benches);
