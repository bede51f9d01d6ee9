//! Sample containers and interval estimates.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::config::SimConfig;

/// Bins 0..cap−1 plus an overflow bin at index `cap`.
pub const HISTOGRAM_CAP: usize = 10_000;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Integer-valued histogram with a lumped overflow bin.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Histogram {
    counts: Vec<u64>,
    overflow: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts, overflow: 0 }
    }

    pub fn record(&mut self, value: u64) {
        if value as usize >= HISTOGRAM_CAP {
            self.overflow += 1;
            return;
        }
        let v = value as usize;
        if v >= self.counts.len() {
            self.counts.resize(v + 1, 0);
        }
        self.counts[v] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn count(&self, value: usize) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// Largest recorded value below the cap, plus one.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Relative frequencies of bins 0..support(); overflow excluded.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn mean(&self) -> f64 {
        let n = self.total() as f64;
        let s: f64 = self.counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum();
        (s + HISTOGRAM_CAP as f64 * self.overflow as f64) / n
    }

    /// Nonzero (value, count) pairs; the overflow bin is reported at value = cap.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> =
            self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k as u64, c)).collect();
        if self.overflow > 0 {
            v.push((HISTOGRAM_CAP as u64, self.overflow));
        }
        v
    }

    /// Bin-wise sum; order of merges does not matter.
    pub fn merge(&mut self, other: &Histogram) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.overflow += other.overflow;
    }
}

impl Serialize for Histogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs = self.pairs();
        let mut seq = serializer.serialize_seq(Some(pairs.len()))?;
        for p in &pairs {
            seq.serialize_element(p)?;
        }
        seq.end()
    }
}

/// Point estimate with standard error and 95% normal interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: usize,
}

impl MetricEstimate {
    pub fn from_mean_and_error(mean: f64, std_error: f64, samples: usize) -> Self {
        Self { mean, std_error, ci_low: mean - Z95 * std_error, ci_high: mean + Z95 * std_error, samples }
    }

    /// Mean and standard error of independent observations.
    pub fn from_iid(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            f64::NAN
        };
        Self::from_mean_and_error(mean, (var / n as f64).sqrt(), n)
    }

    pub fn ci_width(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }

    /// |x − mean| / std_error
    pub fn z_score(&self, x: f64) -> f64 {
        (x - self.mean).abs() / self.std_error
    }
}

/// Batch-means estimate for a correlated sequence (default 50 batches).
pub fn batch_means(samples: &[f64], batches: usize) -> MetricEstimate {
    let n = samples.len();
    let batches = batches.min(n).max(1);
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| samples[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let overall = samples.iter().sum::<f64>() / n as f64;
    let est = MetricEstimate::from_iid(&means);
    MetricEstimate::from_mean_and_error(overall, est.std_error, n)
}

pub const DEFAULT_BATCHES: usize = 50;

/// Nats offered by the channel against nats actually carried.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct WorkLedger {
    pub offered: f64,
    pub served: f64,
    /// Blocks whose whole capacity was used with data still waiting.
    pub busy_blocks: u64,
    pub busy_offered: f64,
    pub busy_served: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimMetadata {
    pub config: SimConfig,
    pub replication: u64,
    pub theta: f64,
    pub packet_size: f64,
    pub nu: f64,
    /// θ ≥ 1: the run has no stationary regime.
    pub unstable: bool,
    /// Fraction of departure-epoch samples in the overflow bin.
    pub overflow_mass: f64,
    /// Overflow mass above 1e−6 at θ ≤ 0.8.
    pub overflow_flagged: bool,
}

/// Raw output of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub metadata: SimMetadata,
    /// Packets left behind at each departure epoch.
    pub queue_length_histogram_departure: Histogram,
    /// Packets present at each block boundary n⁺.
    pub queue_length_histogram_boundary: Histogram,
    /// Whole blocks per packet (discretized service time).
    pub service_time_histogram: Histogram,
    /// Per-packet delay in blocks, in departure order.
    #[serde(skip)]
    pub delay_samples: Vec<f64>,
    /// Fraction of its final service chunk each packet used (continuous engine only).
    #[serde(skip)]
    pub vestige_samples: Vec<f64>,
    /// Whole blocks per packet, aligned with `delay_samples`.
    #[serde(skip)]
    pub service_samples: Vec<u32>,
    pub work: WorkLedger,
    /// Mean of (departure time − arrival time) measured on the block clock.
    pub wallclock_delay_mean: Option<f64>,
}

/// Headline metrics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimSummary {
    pub packets: usize,
    pub mean_delay: MetricEstimate,
    pub mean_vestige: Option<MetricEstimate>,
    pub mean_service: f64,
    pub mean_queue_departure: f64,
    pub mean_queue_boundary: f64,
    pub empty_fraction_departure: f64,
    pub empty_fraction_boundary: f64,
}

impl SimStats {
    pub(crate) fn finish_metadata(&mut self) {
        let total = self.queue_length_histogram_departure.total();
        let mass = if total > 0 {
            self.queue_length_histogram_departure.overflow() as f64 / total as f64
        } else {
            0.0
        };
        self.metadata.overflow_mass = mass;
        self.metadata.overflow_flagged = mass > 1e-6 && self.metadata.theta <= 0.8;
    }

    /// Vestige samples of packets served within a single block (T = 0).
    pub fn zero_service_vestiges(&self) -> Vec<f64> {
        self.vestige_samples
            .iter()
            .zip(&self.service_samples)
            .filter(|(_, &t)| t == 0)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn summary(&self) -> SimSummary {
        let dep = &self.queue_length_histogram_departure;
        let bnd = &self.queue_length_histogram_boundary;
        let frac0 = |h: &Histogram| if h.is_empty() { f64::NAN } else { h.count(0) as f64 / h.total() as f64 };
        let mean = |h: &Histogram| if h.is_empty() { f64::NAN } else { h.mean() };
        SimSummary {
            packets: self.delay_samples.len(),
            mean_delay: batch_means(&self.delay_samples, DEFAULT_BATCHES),
            mean_vestige: (!self.vestige_samples.is_empty())
                .then(|| batch_means(&self.vestige_samples, DEFAULT_BATCHES)),
            mean_service: self.service_time_histogram.mean(),
            mean_queue_departure: mean(dep),
            mean_queue_boundary: mean(bnd),
            empty_fraction_departure: frac0(dep),
            empty_fraction_boundary: frac0(bnd),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_overflow_and_merge() {
        let mut h = Histogram::new();
        h.record(0);
        h.record(3);
        h.record(HISTOGRAM_CAP as u64 + 5);
        assert_eq!(h.total(), 3);
        assert_eq!(h.overflow(), 1);
        assert_eq!(h.pairs(), vec![(0, 1), (3, 1), (HISTOGRAM_CAP as u64, 1)]);
        let mut a = h.clone();
        let mut b = Histogram::from_counts(vec![1, 1, 1, 1, 1, 1]);
        a.merge(&Histogram::from_counts(vec![1, 1, 1, 1, 1, 1]));
        b.merge(&h);
        assert_eq!(a, b);
    }

    #[test]
    fn histogram_serializes_as_pairs() {
        let h = Histogram::from_counts(vec![2, 0, 5]);
        assert_eq!(serde_json::to_string(&h).unwrap(), "[[0,2],[2,5]]");
    }

    #[test]
    fn iid_interval() {
        let e = MetricEstimate::from_iid(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(e.contains(2.5));
    }

    #[test]
    fn batch_means_of_constant_has_zero_error() {
        let e = batch_means(&vec![0.25; 1000], 10);
        assert_eq!(e.mean, 0.25);
        assert_eq!(e.std_error, 0.0);
    }
}
