//! Replicate scheduling.
//!
//! Replicates are grouped in fixed-size chunks. Each chunk is folded
//! sequentially and the chunk results are returned in chunk order, so any
//! executor that preserves that order produces bit-identical reductions.

use crate::accum::Moments;
use alloc::vec::Vec;
use core::ops::Range;

/// Number of replicates folded together before results are merged.
pub const CHUNK: u64 = 1024;

pub trait Executor: Sync {
    /// Calls `f` on consecutive ranges of at most [`CHUNK`] replicate indices
    /// covering `0..count`, returning the results in range order.
    fn chunks<A, F>(&self, count: u64, f: F) -> Vec<A>
    where
        A: Send,
        F: Fn(Range<u64>) -> A + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Default, Clone, Copy)]
pub struct Serial;

impl Executor for Serial {
    fn chunks<A, F>(&self, count: u64, f: F) -> Vec<A>
    where
        A: Send,
        F: Fn(Range<u64>) -> A + Sync + Send,
    {
        chunk_ranges(count).map(f).collect()
    }
}

pub fn chunk_ranges(count: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    let n_chunks = count.div_ceil(CHUNK);
    (0..n_chunks).map(move |c| c * CHUNK..((c + 1) * CHUNK).min(count))
}

/// Counts successes of a per-replicate indicator.
pub fn count_successes<E, F>(exec: &E, reps: u64, f: F) -> u64
where
    E: Executor + ?Sized,
    F: Fn(u64) -> bool + Sync + Send,
{
    exec.chunks(reps, |r| r.filter(|&i| f(i)).count() as u64)
        .into_iter()
        .sum()
}

/// Mean and spread of a per-replicate statistic, merged in chunk order.
pub fn collect_moments<E, F>(exec: &E, reps: u64, f: F) -> Moments
where
    E: Executor + ?Sized,
    F: Fn(u64) -> f64 + Sync + Send,
{
    let mut total = Moments::default();
    for part in exec.chunks(reps, |r| r.map(&f).collect::<Moments>()) {
        total.merge(&part);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_everything_once() {
        let ranges: Vec<_> = chunk_ranges(2 * CHUNK + 5).collect();
        assert_eq!(ranges.len(), 3);
        assert_eq!(ranges[2], 2 * CHUNK..2 * CHUNK + 5);
        assert_eq!(chunk_ranges(0).count(), 0);
    }

    #[test]
    fn count_successes_counts() {
        assert_eq!(count_successes(&Serial, 3000, |i| i % 3 == 0), 1000);
    }
}
