//! Order-preserving parallel map.
//!
//! Results are always returned in input order, so outputs do not depend on
//! the number of worker threads.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Runs `f` on a pool capped at `threads` workers (no-op without the
/// `parallel` feature).
#[cfg(feature = "parallel")]
pub fn with_thread_cap<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_thread_cap<R>(_threads: usize, f: impl FnOnce() -> R) -> R {
    f()
}
