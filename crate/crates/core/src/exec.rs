//! Data-parallel building blocks with a sequential fallback.
//!
//! Every helper merges results in input order, so output is identical for any
//! thread count and for the sequential path. With the `parallel` feature
//! disabled the crate compiles without rayon and [`Exec::Sequential`] is the
//! only mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution strategy for the data-parallel inner loops.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Exec::Parallel
    }

    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Exec::Sequential
    }
}

/// Ordered map over a slice.
pub fn map_slice<T: Sync, U: Send>(
    exec: Exec,
    items: &[T],
    f: impl Fn(&T) -> U + Sync + Send,
) -> Vec<U> {
    match exec {
        Exec::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
    }
}

/// Ordered map over an index range.
pub fn map_range<U: Send>(
    exec: Exec,
    range: std::ops::Range<u64>,
    f: impl Fn(u64) -> U + Sync + Send,
) -> Vec<U> {
    match exec {
        Exec::Sequential => range.map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().map(f).collect(),
    }
}

/// First `Some` in input order; the parallel path still returns the earliest.
pub fn find_first_map<T: Sync, U: Send>(
    exec: Exec,
    items: &[T],
    f: impl Fn(&T) -> Option<U> + Sync + Send,
) -> Option<U> {
    match exec {
        Exec::Sequential => items.iter().find_map(f),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().filter_map(f).find_first(|_| true),
    }
}

/// Count of items over an index range satisfying `f`.
pub fn count_range(
    exec: Exec,
    range: std::ops::Range<u64>,
    f: impl Fn(u64) -> bool + Sync + Send,
) -> u64 {
    match exec {
        Exec::Sequential => range.filter(|&i| f(i)).count() as u64,
        #[cfg(feature = "parallel")]
        Exec::Parallel => range.into_par_iter().filter(|&i| f(i)).count() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_slice(Exec::Sequential, &items, |&x| x * x);
        assert_eq!(seq, map_range(Exec::Sequential, 0..1000, |x| x * x));
        #[cfg(feature = "parallel")]
        {
            assert_eq!(seq, map_slice(Exec::Parallel, &items, |&x| x * x));
            assert_eq!(seq, map_range(Exec::Parallel, 0..1000, |x| x * x));
        }
    }

    #[test]
    fn find_first_is_earliest() {
        let items: Vec<u64> = (0..10_000).collect();
        let want = Some(123);
        assert_eq!(
            find_first_map(Exec::Sequential, &items, |&x| (x >= 123).then_some(x)),
            want
        );
        #[cfg(feature = "parallel")]
        assert_eq!(
            find_first_map(Exec::Parallel, &items, |&x| (x >= 123).then_some(x)),
            want
        );
    }
}
