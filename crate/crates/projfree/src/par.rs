//! Index-parallel map with a sequential fallback.
//!
//! Monte Carlo trials and sweep runs are independent given their derived
//! RNG streams, so they parallelize over an index range. Results come back
//! in index order in both modes, which keeps every aggregate (and every CSV
//! byte) identical whether or not the `parallel` feature is enabled.

/// Applies `f` to `0..count`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_indices<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indices<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Always-sequential variant, kept as the baseline for benchmarks and for
/// asserting that parallel execution does not change results.
pub fn map_indices_seq<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..count).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let par: Vec<u64> = map_indices(1000, |i| (i as u64).wrapping_mul(2654435761));
        let seq: Vec<u64> = map_indices_seq(1000, |i| (i as u64).wrapping_mul(2654435761));
        assert_eq!(par, seq);
    }
}
