//! Order-preserving map over an index range, parallel when the `parallel`
//! feature is on. Output order never depends on scheduling.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Runs `f` over disjoint chunks of `data` and returns the largest result
/// (0 for empty input). Max is order-independent, so the result does not
/// depend on how chunks are scheduled.
#[cfg(feature = "parallel")]
pub(crate) fn max_over_chunks_mut<T, F>(data: &mut [T], chunk: usize, f: F) -> f64
where
    T: Send,
    F: Fn(usize, &mut [T]) -> f64 + Sync + Send,
{
    use rayon::prelude::*;
    data.par_chunks_mut(chunk)
        .enumerate()
        .map(|(i, c)| f(i * chunk, c))
        .reduce(|| 0.0, f64::max)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn max_over_chunks_mut<T, F>(data: &mut [T], chunk: usize, f: F) -> f64
where
    F: Fn(usize, &mut [T]) -> f64,
{
    data.chunks_mut(chunk)
        .enumerate()
        .map(|(i, c)| f(i * chunk, c))
        .fold(0.0, f64::max)
}
