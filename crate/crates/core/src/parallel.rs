//! Replica-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) replicas run on rayon; without it
//! everything runs on the calling thread. Output is always ordered by
//! replica index, so aggregates do not depend on scheduling.

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

/// Maps `f` over `0..count`, in parallel when the `parallel` feature is on.
pub fn map_replicas<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_replicas_sequential(count, f)
    }
}

/// Always sequential; the reference the parallel path must agree with.
pub fn map_replicas_sequential<T, F>(count: u64, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    (0..count).map(f).collect()
}

/// Runs `op` with `threads` workers (0 = library default).
///
/// Without the `parallel` feature the thread count is ignored.
pub fn with_threads<T, F>(threads: usize, op: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    {
        if threads == 0 {
            return Ok(op());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        Ok(pool.install(op))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(op())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential_order() {
        let f = |i: u64| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 7;
        assert_eq!(map_replicas(1000, f), map_replicas_sequential(1000, f));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let f = |i: u64| (i as f64).sqrt();
        let one = with_threads(1, || map_replicas(500, f)).unwrap();
        let three = with_threads(3, || map_replicas(500, f)).unwrap();
        assert_eq!(one, three);
    }
}
