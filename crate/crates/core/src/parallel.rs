//! Thin shim over rayon so the crate builds with or without the `parallel`
//! feature. Per-element work is embarrassingly parallel; reductions are done
//! sequentially over the collected per-element results so that sums are
//! evaluated in a fixed order regardless of worker count.

#[cfg(feature = "parallel")]
pub fn map_elements<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_elements<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..n).map(f).collect()
}

/// Fallible variant; the first error (lowest element index) wins.
pub fn try_map_elements<T, F>(n: usize, f: F) -> crate::Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> crate::Result<T> + Sync + Send,
{
    let out = map_elements(n, f);
    out.into_iter().collect()
}
