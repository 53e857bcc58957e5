//! Worker pool plumbing. Results are always collected in input order and
//! reduced sequentially, so aggregates do not depend on the worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "GRAMGRID_WORKERS";

/// Worker count from `GRAMGRID_WORKERS`, if set to a positive integer.
pub fn workers_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Run `f` inside a dedicated pool of `workers` threads (rayon's default when
/// `None`).
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::validation("worker count must be positive"));
        }
        b = b.num_threads(n);
    }
    let pool = b
        .build()
        .map_err(|e| Error::numerical(format!("could not start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Map `f` over `lo..hi` in parallel, returning results in index order.
pub fn ordered_map<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (lo..hi).into_par_iter().map(f).collect()
}

/// Like [`ordered_map`] but stops at the first error in index order.
pub fn try_ordered_map<T, F>(lo: u64, hi: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    ordered_map(lo, hi, f).into_iter().collect()
}
