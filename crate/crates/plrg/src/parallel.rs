//! Rayon-backed replicate executor.

use plrg_core::exec::{chunk_ranges, Executor};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use std::ops::Range;
use std::sync::Arc;

/// Runs chunks on a thread pool. Results come back in chunk order, so
/// reductions do not depend on the thread count.
#[derive(Clone, Default)]
pub struct Parallel {
    pool: Option<Arc<ThreadPool>>,
}

impl Parallel {
    /// Uses the global rayon pool.
    pub fn global() -> Self {
        Self { pool: None }
    }

    /// A dedicated pool with `threads` workers.
    pub fn with_threads(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Self {
            pool: Some(Arc::new(pool)),
        })
    }
}

impl std::fmt::Debug for Parallel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Parallel")
            .field("threads", &self.pool.as_ref().map(|p| p.current_num_threads()))
            .finish()
    }
}

impl Executor for Parallel {
    fn chunks<A, F>(&self, count: u64, f: F) -> Vec<A>
    where
        A: Send,
        F: Fn(Range<u64>) -> A + Sync + Send,
    {
        let ranges: Vec<Range<u64>> = chunk_ranges(count).collect();
        let work = || ranges.into_par_iter().map(&f).collect();
        match &self.pool {
            Some(pool) => pool.install(work),
            None => work(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use plrg_core::exec::{collect_moments, Serial};

    #[test]
    fn reductions_match_serial_bit_for_bit() {
        let f = |r: u64| ((r * 2_654_435_761) % 1000) as f64 / 7.0;
        let serial = collect_moments(&Serial, 10_000, f);
        for threads in [1, 3, 8] {
            let par = collect_moments(&Parallel::with_threads(threads).unwrap(), 10_000, f);
            assert_eq!(par.mean.to_bits(), serial.mean.to_bits());
            assert_eq!(par.variance().to_bits(), serial.variance().to_bits());
        }
    }
}
