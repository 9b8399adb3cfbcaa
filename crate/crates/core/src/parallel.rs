//! Data-parallel map over independent check items, with a sequential
//! fallback selected at runtime or forced at compile time.
//!
//! Every verification suite is a map over an index set of independent
//! checks; results are collected in input order, so both execution modes
//! produce identical output.

/// Execution strategy for suite-level maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    /// Process items in order on the calling thread.
    Sequential,
    /// Process items on the rayon thread pool. Falls back to sequential
    /// when the `parallel` feature is disabled.
    Rayon,
}

/// Maps `f` over `items`, preserving input order in the output.
pub fn map_items<T, U, F>(mode: Parallelism, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        Parallelism::Sequential => items.into_iter().map(f).collect(),
        Parallelism::Rayon => map_rayon(items, f),
    }
}

#[cfg(feature = "parallel")]
fn map_rayon<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_rayon<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let items: Vec<i64> = (0..100).collect();
        let seq = map_items(Parallelism::Sequential, items.clone(), |x| x * x);
        let par = map_items(Parallelism::Rayon, items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
