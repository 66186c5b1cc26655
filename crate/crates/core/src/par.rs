//! Order-preserving data-parallel helpers. With the `parallel` feature
//! (default) the work is distributed through rayon; without it the same
//! entry points run sequentially, so callers are agnostic. Results are
//! merged in input order either way, keeping every consumer deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, preserving input order in the output.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Always-sequential map with the same signature, kept for benchmarking the
/// parallel path against a like-for-like baseline.
pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// `true` iff the predicate holds for every item.
pub fn all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().all(pred)
    }
}

/// Collect the items failing a check, in input order.
pub fn failures<T, R, F>(items: &[T], check: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().filter_map(check).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().filter_map(check).collect()
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn map_preserves_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let doubled = super::map(&xs, |x| x * 2);
        assert_eq!(doubled, super::map_seq(&xs, |x| x * 2));
    }
}
