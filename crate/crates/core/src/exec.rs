//! Data-parallel helpers. With the `parallel` feature (default) the `*_par`
//! entry points fan out over rayon; without it they fall back to the
//! sequential implementations so the rest of the workspace compiles and runs
//! unchanged.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map a function over indices, sequentially.
pub fn map_indexed_seq<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Map a function over indices, in parallel when the `parallel` feature is
/// enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    map_indexed_seq(n, f)
}

/// True when this build dispatches `map_indexed` through rayon.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
