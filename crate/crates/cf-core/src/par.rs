//! Data-parallel helpers with a sequential fallback.
//!
//! Everything here is deterministic: work is split into fixed chunks that do
//! not depend on the thread count, and results come back in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy. `Parallel` degrades to `Sequential` when the crate is
/// built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `f(0), …, f(n−1)` in order.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// `f` applied to every element, in order.
pub fn map_slice<A, T, F>(exec: Exec, xs: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return xs.par_iter().map(f).collect();
    }
    let _ = exec;
    xs.iter().map(f).collect()
}

/// Calls `f(chunk_index, start, chunk)` on consecutive chunks of `out`.
pub fn for_chunks<T, F>(exec: Exec, out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        out.par_chunks_mut(chunk).enumerate().for_each(|(k, c)| f(k, k * chunk, c));
        return;
    }
    let _ = exec;
    for (k, c) in out.chunks_mut(chunk).enumerate() {
        f(k, k * chunk, c);
    }
}
