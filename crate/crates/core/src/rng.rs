//! Reproducible random streams and the worker pool.
//!
//! Every replicate draws from its own ChaCha8 stream, keyed by the run seed
//! and selected by the replicate index, so results do not depend on how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "SELECTOR_LAB_THREADS";

pub type StreamRng = ChaCha8Rng;

/// Stream `index` of the generator keyed by `seed`.
pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Explicit count, else `SELECTOR_LAB_THREADS`, else all cores.
pub fn worker_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(THREADS_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
        })
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Maps `f` over `0..count` on a dedicated pool; output is in index order.
pub fn par_map_indexed<T, F>(count: u64, threads: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let workers = worker_count(threads);
    if workers == 1 {
        return (0..count).map(f).collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(|| (0..count).into_par_iter().map(f).collect())
}
