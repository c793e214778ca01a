//! Order-preserving parallel maps over replica indices.
//!
//! Results come back in index order, so any reduction done afterwards is
//! independent of how many workers ran.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Configures the global worker pool; a no-op without the `parallel` feature.
pub fn set_workers(workers: usize) {
    #[cfg(feature = "parallel")]
    {
        // the pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
}
