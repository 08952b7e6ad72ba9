//! Density of `F_n` among random graphs from G(n, 1/2).

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Budget;
use crate::criterion::{Analysis, VerdictKind};
use crate::error::{Error, Result};
use crate::graph::random_gnp_half_stream;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyRow {
    pub n: usize,
    pub samples: usize,
    pub count_fn: usize,
    pub count_unknown: usize,
    pub fraction: f64,
    pub seed: u64,
    pub elapsed_ms: u128,
}

pub const CSV_HEADER: &str = "n,samples,count_fn,count_unknown,fraction,seed,elapsed_ms";

impl SurveyRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.4},{},{}",
            self.n, self.samples, self.count_fn, self.count_unknown, self.fraction, self.seed, self.elapsed_ms
        )
    }

    /// Row without the timing column, for comparing runs.
    pub fn counts(&self) -> (usize, usize, usize, usize, u64) {
        (self.n, self.samples, self.count_fn, self.count_unknown, self.seed)
    }
}

/// Generator stream used for sample `index` of order `n`. Streams depend
/// only on `(n, index)`, so results do not depend on how samples are spread
/// over workers.
pub fn sample_stream(n: usize, index: usize) -> u64 {
    ((n as u64) << 32) | index as u64
}

pub fn sample_verdict(n: usize, seed: u64, index: usize, budget: &Budget) -> Result<VerdictKind> {
    let g = random_gnp_half_stream(n, seed, sample_stream(n, index));
    Ok(Analysis::new(&g, budget)?.check_fn().kind)
}

/// Samples `samples` graphs per order and counts those certified to lie in
/// `F_n`. `shards` is the number of worker threads.
pub fn run_survey(
    sizes: &[usize],
    samples: usize,
    seed: u64,
    budget: &Budget,
    shards: usize,
) -> Result<Vec<SurveyRow>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidArgument("graph order must be at least 1".into()));
    }
    if samples > u32::MAX as usize {
        return Err(Error::InvalidArgument("too many samples".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(shards.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let start = Instant::now();
        let kinds: Vec<VerdictKind> = pool.install(|| {
            (0..samples)
                .into_par_iter()
                .map(|i| sample_verdict(n, seed, i, budget))
                .collect::<Result<_>>()
        })?;
        let count_fn = kinds.iter().filter(|&&k| k == VerdictKind::DgsByFn).count();
        let count_unknown = kinds
            .iter()
            .filter(|&&k| k == VerdictKind::FactorizationUnknown)
            .count();
        rows.push(SurveyRow {
            n,
            samples,
            count_fn,
            count_unknown,
            fraction: count_fn as f64 / samples as f64,
            seed,
            elapsed_ms: start.elapsed().as_millis(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_samples_rejected() {
        assert!(run_survey(&[10], 0, 1, &Budget::default(), 1).is_err());
    }

    #[test]
    fn single_sample_is_reproducible() {
        let a = run_survey(&[8], 1, 9, &Budget::default(), 1).unwrap();
        let b = run_survey(&[8], 1, 9, &Budget::default(), 2).unwrap();
        assert_eq!(a[0].counts(), b[0].counts());
        assert!(a[0].fraction == 0.0 || a[0].fraction == 1.0);
    }

    #[test]
    fn shard_count_does_not_change_counts() {
        let b = Budget::default();
        let base: Vec<_> = run_survey(&[10, 12], 60, 3, &b, 1)
            .unwrap()
            .iter()
            .map(SurveyRow::counts)
            .collect();
        for shards in [2, 8] {
            let other: Vec<_> = run_survey(&[10, 12], 60, 3, &b, shards)
                .unwrap()
                .iter()
                .map(SurveyRow::counts)
                .collect();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn csv_row_format() {
        let row = SurveyRow {
            n: 10,
            samples: 1000,
            count_fn: 211,
            count_unknown: 0,
            fraction: 0.211,
            seed: 1,
            elapsed_ms: 5,
        };
        assert_eq!(row.to_csv(), "10,1000,211,0,0.2110,1,5");
    }
}
