//! A thread-per-stripe implementation of [`SearchBackend`].

use std::thread;

use cubesum_core::elliptic::{rational_points_with_denominator, CurvePoint, WeierstrassCurve};
use cubesum_core::search::{enumerate_stripe, merge, SearchBackend, SearchConfig, SearchError, SearchResult};

/// Splits `x` into `jobs` residue stripes and denominators round-robin.
/// Results are identical to [`cubesum_core::search::Serial`].
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    pub jobs: usize,
}

impl Threaded {
    pub fn new(jobs: usize) -> Self {
        Threaded { jobs: jobs.max(1) }
    }
}

impl SearchBackend for Threaded {
    fn enumerate(&self, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
        let jobs = self.jobs.max(1);
        if jobs == 1 {
            return enumerate_stripe(cfg, 0, 1);
        }
        let parts: Vec<_> = thread::scope(|s| {
            let handles: Vec<_> = (0..jobs).map(|i| s.spawn(move || enumerate_stripe(cfg, i, jobs))).collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        });
        Ok(merge(parts.into_iter().collect::<Result<Vec<_>, _>>()?))
    }

    fn rational_points(
        &self,
        curve: &WeierstrassCurve,
        max_den: u64,
        max_abs_x: u64,
    ) -> Result<Vec<CurvePoint>, SearchError> {
        let jobs = self.jobs.max(1) as u64;
        let parts: Vec<_> = thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|i| {
                    s.spawn(move || {
                        let mut out = Vec::new();
                        for e in (1..=max_den).filter(|e| e % jobs == i) {
                            out.extend(rational_points_with_denominator(curve, e, max_abs_x)?);
                        }
                        Ok::<_, SearchError>(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("point worker panicked")).collect()
        });
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        out.sort();
        Ok(out)
    }
}
