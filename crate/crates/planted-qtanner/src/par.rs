//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon; without it, or
//! while a [`SequentialGuard`] is alive, they run on the calling thread. Every
//! helper returns results in index order so reductions are independent of the
//! thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

static FORCE_SEQUENTIAL: AtomicUsize = AtomicUsize::new(0);

/// Forces the sequential path process-wide while alive.
pub struct SequentialGuard(());

impl SequentialGuard {
    pub fn new() -> Self {
        FORCE_SEQUENTIAL.fetch_add(1, Ordering::SeqCst);
        SequentialGuard(())
    }
}

impl Default for SequentialGuard {
    fn default() -> Self {
        Self::new()
    }
}

impl Drop for SequentialGuard {
    fn drop(&mut self) {
        FORCE_SEQUENTIAL.fetch_sub(1, Ordering::SeqCst);
    }
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && FORCE_SEQUENTIAL.load(Ordering::SeqCst) == 0
}

/// Threads the helpers spread work over: 1 on the sequential path.
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return rayon::current_num_threads();
    }
    1
}

/// `(0..n).map(f)` collected in order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Applies `f` to every element of `items`, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Writes `out[i] = f(i)` for every index.
pub fn fill<T, F>(out: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
        return;
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o = f(i);
    }
}

/// Calls `f(i, &mut items[i])` for every element.
pub fn for_each_mut<T, F>(items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        items.par_iter_mut().enumerate().for_each(|(i, t)| f(i, t));
        return;
    }
    for (i, t) in items.iter_mut().enumerate() {
        f(i, t);
    }
}

/// Splits `0..total` into at most `max_chunks` contiguous ranges.
pub fn chunk_ranges(total: u64, max_chunks: u64) -> Vec<(u64, u64)> {
    if total == 0 {
        return Vec::new();
    }
    let chunks = max_chunks.clamp(1, total);
    let base = total / chunks;
    let extra = total % chunks;
    let mut out = Vec::with_capacity(chunks as usize);
    let mut start = 0;
    for i in 0..chunks {
        let len = base + u64::from(i < extra);
        out.push((start, start + len));
        start += len;
    }
    out
}

/// Runs `f` on each chunk of `0..total` and returns per-chunk results in
/// chunk order.
pub fn map_chunks<T, F>(total: u64, max_chunks: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let ranges = chunk_ranges(total, max_chunks);
    map_slice(&ranges, |&(a, b)| f(a, b))
}

/// Default chunk count for enumeration loops.
pub const CHUNKS: u64 = 256;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_exactly() {
        for total in [0u64, 1, 7, 256, 1000] {
            let r = chunk_ranges(total, 13);
            let covered: u64 = r.iter().map(|(a, b)| b - a).sum();
            assert_eq!(covered, total);
            for w in r.windows(2) {
                assert_eq!(w[0].1, w[1].0);
            }
        }
    }

    #[test]
    fn sequential_guard_matches_parallel() {
        let par = map_range(1000, |i| i * i);
        let _g = SequentialGuard::new();
        assert!(!parallel_enabled());
        assert_eq!(map_range(1000, |i| i * i), par);
    }
}
