//! Execution-mode switch for the data-parallel loops (Monte-Carlo trials,
//! fixture batches, exhaustive profile sweeps).
//!
//! Every parallel loop in this crate aggregates with an order-independent
//! reduction, so results are bit-identical across modes and thread counts.
//! Without the `parallel` feature, `Parallel` degrades to sequential.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl ExecMode {
    pub fn from_jobs(jobs: usize) -> ExecMode {
        if jobs <= 1 {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        }
    }
}

/// Map `f` over `0..n` and reduce with a commutative, associative `combine`.
pub fn map_reduce<T, M, C>(mode: ExecMode, n: usize, identity: T, map: M, combine: C) -> T
where
    T: Send,
    M: Fn(usize) -> T + Send + Sync,
    C: Fn(T, T) -> T + Send + Sync,
{
    match mode {
        ExecMode::Sequential => (0..n).map(map).fold(identity, combine),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            let partial = (0..n)
                .into_par_iter()
                .map(map)
                .fold(
                    || None::<T>,
                    |acc, x| match acc {
                        None => Some(x),
                        Some(a) => Some(combine(a, x)),
                    },
                )
                .reduce(
                    || None,
                    |a, b| match (a, b) {
                        (None, x) | (x, None) => x,
                        (Some(a), Some(b)) => Some(combine(a, b)),
                    },
                );
            match partial {
                Some(x) => combine(identity, x),
                None => identity,
            }
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => (0..n).map(map).fold(identity, combine),
    }
}

/// Collect `f(i)` for `0..n` in index order regardless of mode.
pub fn map_collect<T, M>(mode: ExecMode, n: usize, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(usize) -> T + Send + Sync,
{
    match mode {
        ExecMode::Sequential => (0..n).map(map).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => (0..n).into_par_iter().map(map).collect(),
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => (0..n).map(map).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_on_sum() {
        let seq = map_reduce(ExecMode::Sequential, 1000, 0u64, |i| i as u64, |a, b| a + b);
        let par = map_reduce(ExecMode::Parallel, 1000, 0u64, |i| i as u64, |a, b| a + b);
        assert_eq!(seq, par);
        assert_eq!(seq, 499_500);
    }

    #[test]
    fn collect_preserves_order() {
        let v = map_collect(ExecMode::Parallel, 100, |i| i * 2);
        assert_eq!(v, (0..100).map(|i| i * 2).collect::<Vec<_>>());
    }
}
