//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers run on the current rayon pool;
//! without it (or with [`Execution::Sequential`]) they run in the calling
//! thread. Every helper returns results in work-unit order, so callers get
//! identical output regardless of how the work was scheduled.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How exhaustive loops are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the ambient rayon pool. Falls back to sequential when the crate
    /// is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f` on every unit `0..count`, returning results in unit order.
pub fn map_units<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

/// Splits `range` into chunks of at most `chunk` indices, applies `f` to
/// each chunk and sums the partial results.
pub fn sum_chunks<F>(exec: Execution, range: Range<u64>, chunk: u64, f: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync + Send,
{
    let chunk = chunk.max(1);
    let len = range.end.saturating_sub(range.start);
    let units = len.div_ceil(chunk) as usize;
    let start = range.start;
    let end = range.end;
    map_units(exec, units, |u| {
        let lo = start + u as u64 * chunk;
        f(lo..(lo + chunk).min(end))
    })
    .into_iter()
    .sum()
}

/// Mutably visits every element of `items` with its index.
pub fn for_each_mut<T, F>(exec: Execution, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        items.par_iter_mut().enumerate().for_each(|(i, x)| f(i, x));
        return;
    }
    let _ = exec;
    items.iter_mut().enumerate().for_each(|(i, x)| f(i, x));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_independent() {
        let f = |r: Range<u64>| r.map(|i| i * i % 7).sum::<u64>();
        let want: u64 = (3..1000u64).map(|i| i * i % 7).sum();
        for chunk in [1, 2, 7, 64, 997, 5000] {
            assert_eq!(sum_chunks(Execution::Parallel, 3..1000, chunk, f), want);
            assert_eq!(sum_chunks(Execution::Sequential, 3..1000, chunk, f), want);
        }
        assert_eq!(sum_chunks(Execution::Parallel, 5..5, 3, f), 0);
    }

    #[test]
    fn unit_order_preserved() {
        let v = map_units(Execution::Parallel, 100, |i| i * 2);
        assert_eq!(v, (0..100).map(|i| i * 2).collect::<Vec<_>>());
    }
}
