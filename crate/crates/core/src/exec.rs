//! Work dispatch for per-token and per-sentence jobs.
//!
//! With the `parallel` feature (default) jobs run on a dedicated rayon pool
//! whose size bounds the number of backend calls in flight. Without it, or
//! with [`Executor::sequential`], jobs run one after another on the calling
//! thread.

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

pub struct Executor {
    threads: usize,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("threads", &self.threads)
            .field("parallel", &self.is_parallel())
            .finish()
    }
}

impl Executor {
    pub fn sequential() -> Self {
        Executor {
            threads: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// A pool of `threads` workers. Falls back to sequential execution when
    /// the crate is built without the `parallel` feature or `threads <= 1`.
    pub fn with_threads(threads: usize) -> Result<Self> {
        #[cfg(feature = "parallel")]
        {
            if threads > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .thread_name(|i| format!("seqprobe-{i}"))
                    .build()
                    .map_err(|e| Error::ThreadPool(e.to_string()))?;
                return Ok(Executor {
                    threads,
                    pool: Some(pool),
                });
            }
        }
        let _ = threads;
        Ok(Self::sequential())
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    /// Applies `f` to every item and returns results in input order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            // jobs block on I/O, so split down to single items
            return pool.install(|| items.par_iter().with_max_len(1).map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::sequential()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn map_preserves_order() {
        let items: Vec<usize> = (0..50).collect();
        for exec in [Executor::sequential(), Executor::with_threads(4).unwrap()] {
            let out = exec.map(&items, |x| x * 2);
            assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn pool_runs_blocking_jobs_concurrently_up_to_its_size() {
        let exec = Executor::with_threads(8).unwrap();
        assert!(exec.is_parallel());
        let live = AtomicUsize::new(0);
        let peak = AtomicUsize::new(0);
        let items: Vec<usize> = (0..32).collect();
        exec.map(&items, |_| {
            let now = live.fetch_add(1, Ordering::SeqCst) + 1;
            peak.fetch_max(now, Ordering::SeqCst);
            std::thread::sleep(std::time::Duration::from_millis(5));
            live.fetch_sub(1, Ordering::SeqCst);
        });
        let peak = peak.load(Ordering::SeqCst);
        assert!(peak <= 8, "peak {peak}");
        assert!(peak >= 2, "peak {peak}");
    }

    #[test]
    fn sequential_never_overlaps() {
        let exec = Executor::sequential();
        let live = AtomicUsize::new(0);
        let items = [(); 10];
        exec.map(&items, |_| {
            assert_eq!(live.fetch_add(1, Ordering::SeqCst), 0);
            live.fetch_sub(1, Ordering::SeqCst);
        });
    }
}
