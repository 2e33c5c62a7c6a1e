//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in index order, so parallel and sequential
//! runs produce identical output.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Execution mode for the enumeration-heavy operations.
///
/// `Parallel` runs on the rayon pool when the crate is built with the
/// `parallel` feature and degrades to `Sequential` otherwise.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `range.filter_map(f)`, in order.
pub fn filter_map_range<T, F>(mode: Parallelism, range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return range.into_par_iter().filter_map(f).collect();
    }
    let _ = mode;
    range.filter_map(f).collect()
}

/// The first `f(i)` that is `Some`, scanning `range` in order.
pub fn find_map_first_range<T, F>(mode: Parallelism, range: Range<u64>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return range.into_par_iter().find_map_first(f);
    }
    let _ = mode;
    range.into_iter().find_map(f)
}

/// `items.map(f)`, in order.
pub fn map_slice<I, T, F>(mode: Parallelism, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// The first `f(item)` that is `Some`, in slice order.
pub fn find_map_first_slice<I, T, F>(mode: Parallelism, items: &[I], f: F) -> Option<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = mode;
    items.iter().find_map(f)
}

/// Whether `pred` holds for some item; short-circuits.
pub fn any_slice<I, F>(mode: Parallelism, items: &[I], pred: F) -> bool
where
    I: Sync,
    F: Fn(&I) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().any(pred);
    }
    let _ = mode;
    items.iter().any(pred)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            let v = filter_map_range(mode, 0..1000, |i| (i % 7 == 3).then_some(i * 2));
            assert_eq!(v, (0..1000).filter(|i| i % 7 == 3).map(|i| i * 2).collect::<Vec<_>>());
            assert_eq!(find_map_first_range(mode, 0..1000, |i| (i > 500 && i % 13 == 0).then_some(i)), Some(507));
            let items: Vec<u32> = (0..50).collect();
            assert_eq!(map_slice(mode, &items, |x| x + 1)[49], 50);
            assert_eq!(find_map_first_slice(mode, &items, |&x| (x % 10 == 9).then_some(x)), Some(9));
            assert!(any_slice(mode, &items, |&x| x == 42));
        }
    }
}
