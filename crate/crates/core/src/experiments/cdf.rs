//! Empirical distribution of observed spectral distances, with Wilson
//! intervals, and order-independent aggregation of worker batches.

use super::ExperimentError;

/// Distances produced by one worker for a contiguous trial range starting
/// at `first_trial`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialBatch {
    pub first_trial: u64,
    pub distances: Vec<f64>,
}

impl TrialBatch {
    fn end(&self) -> u64 {
        self.first_trial + self.distances.len() as u64
    }
}

/// Merges worker batches into the full per-trial distance list, ordered
/// by trial index. The merge is order-independent, so any partition of
/// the trial range reproduces the single-worker result exactly.
/// Overlapping ranges are rejected.
pub fn aggregate(mut batches: Vec<TrialBatch>) -> Result<Vec<f64>, ExperimentError> {
    batches.retain(|b| !b.distances.is_empty());
    batches.sort_by_key(|b| b.first_trial);
    for pair in batches.windows(2) {
        if pair[1].first_trial < pair[0].end() {
            return Err(ExperimentError::OverlappingBatches {
                first_end: pair[0].end(),
                second_start: pair[1].first_trial,
            });
        }
    }
    Ok(batches.into_iter().flat_map(|b| b.distances).collect())
}

/// Sorted observed distances; evaluation returns `P[dist ≤ s]` with a
/// Wilson-score 95% interval.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_distances(distances: &[f64]) -> Self {
        let mut sorted = distances.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
        Self { sorted }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Number of observations `≤ s`.
    pub fn count_at(&self, s: f64) -> usize {
        self.sorted.partition_point(|&v| v <= s)
    }

    pub fn evaluate(&self, s: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.count_at(s) as f64 / self.sorted.len() as f64
    }

    /// Wilson 95% interval for `P[dist ≤ s]`.
    pub fn wilson_interval(&self, s: f64) -> (f64, f64) {
        wilson_interval(self.count_at(s), self.len(), 1.959963984540054)
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denом = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denом;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denом;
    ((center - half).max(0.0), (center + half).min(1.0))
}
