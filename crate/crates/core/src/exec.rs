//! Execution strategy for the embarrassingly parallel scenario and lattice
//! loops. With the `parallel` feature (default) `Threading::Parallel` fans
//! out over rayon; without it every mode degrades to the sequential loop.
//!
//! Results are collected in input order, so verdicts and witnesses are
//! identical whichever mode runs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Threading {
    Sequential,
    #[default]
    Parallel,
}

/// Map `f` over `items`, preserving order.
pub fn map<T, U, F>(mode: Threading, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match mode {
        Threading::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Threading::Parallel => items.par_iter().map(f).collect(),
        #[cfg(not(feature = "parallel"))]
        Threading::Parallel => items.iter().map(f).collect(),
    }
}

/// First `Some` produced over `items` in input order, or `None`.
pub fn find_first<T, U, F>(mode: Threading, items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    match mode {
        Threading::Sequential => items.iter().find_map(f),
        #[cfg(feature = "parallel")]
        Threading::Parallel => items.par_iter().find_map_first(f),
        #[cfg(not(feature = "parallel"))]
        Threading::Parallel => items.iter().find_map(f),
    }
}
