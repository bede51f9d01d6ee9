//! Distances and goodness-of-fit tests on simulated output.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::stats::{Histogram, SimStats};
use super::SimError;

/// Distance between two histograms; overflow bins are compared as one extra category.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochComparison {
    pub total_variation: f64,
    /// Two-proportion z-score for each bin 0..support (overflow last when present).
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    pub samples_a: u64,
    pub samples_b: u64,
}

fn normalized(h: &Histogram, len: usize) -> Vec<f64> {
    let n = h.total() as f64;
    let mut p: Vec<f64> = (0..len).map(|k| h.count(k) as f64 / n).collect();
    p.push(h.overflow() as f64 / n);
    p
}

/// ½ Σ |p_k − q_k| over the normalized histograms.
pub fn total_variation(a: &Histogram, b: &Histogram) -> Result<f64, SimError> {
    if a.is_empty() || b.is_empty() {
        return Err(SimError::EmptyHistogram);
    }
    let len = a.support().max(b.support());
    let p = normalized(a, len);
    let q = normalized(b, len);
    Ok(0.5 * p.iter().zip(&q).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// Total variation between a histogram and a probability vector; missing mass is
/// charged in full.
pub fn tv_to_distribution(h: &Histogram, probabilities: &[f64]) -> Result<f64, SimError> {
    if h.is_empty() {
        return Err(SimError::EmptyHistogram);
    }
    let len = h.support().max(probabilities.len());
    let p = normalized(h, len);
    let mut tv = 0.0;
    for (k, &pk) in p.iter().enumerate().take(len) {
        tv += (pk - probabilities.get(k).copied().unwrap_or(0.0)).abs();
    }
    let listed: f64 = probabilities.iter().sum();
    tv += (p[len] - (1.0 - listed).max(0.0)).abs();
    Ok(0.5 * tv)
}

pub fn compare_histograms(a: &Histogram, b: &Histogram) -> Result<EpochComparison, SimError> {
    let tv = total_variation(a, b)?;
    let len = a.support().max(b.support());
    let (na, nb) = (a.total() as f64, b.total() as f64);
    let p = normalized(a, len);
    let q = normalized(b, len);
    let bins = if a.overflow() + b.overflow() > 0 { len + 1 } else { len };
    let z_scores: Vec<f64> = (0..bins)
        .map(|k| {
            let pooled = (p[k] * na + q[k] * nb) / (na + nb);
            let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
            if se > 0.0 {
                (p[k] - q[k]) / se
            } else {
                0.0
            }
        })
        .collect();
    let max_abs_z = z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    Ok(EpochComparison { total_variation: tv, z_scores, max_abs_z, samples_a: a.total(), samples_b: b.total() })
}

/// Departure-epoch histogram against block-boundary histogram of the same run.
pub fn compare_epochs(stats: &SimStats) -> Result<EpochComparison, SimError> {
    compare_histograms(&stats.queue_length_histogram_departure, &stats.queue_length_histogram_boundary)
}

/// sup |F_n(x) − F(x)| for a continuous reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64, SimError> {
    if samples.is_empty() {
        return Err(SimError::InsufficientData("no samples".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson test of a histogram against a PMF on 0, 1, 2, …
///
/// Leading bins with expected count ≥ 5 are kept; everything beyond them is pooled
/// into one tail bin (merged back if its expected count is below 5).
pub fn chi_square_gof<F: Fn(usize) -> f64>(h: &Histogram, pmf: F) -> Result<ChiSquareResult, SimError> {
    if h.is_empty() {
        return Err(SimError::EmptyHistogram);
    }
    let n = h.total() as f64;
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    let mut k = 0;
    loop {
        let e = n * pmf(k);
        if e < 5.0 {
            break;
        }
        observed.push(h.count(k) as f64);
        expected.push(e);
        k += 1;
    }
    let tail_obs = n - observed.iter().sum::<f64>();
    let tail_exp = n - expected.iter().sum::<f64>();
    if tail_exp >= 5.0 || observed.is_empty() {
        observed.push(tail_obs);
        expected.push(tail_exp);
    } else {
        *observed.last_mut().unwrap() += tail_obs;
        *expected.last_mut().unwrap() += tail_exp;
    }
    if observed.len() < 2 {
        return Err(SimError::InsufficientData("fewer than two bins with expected count ≥ 5".into()));
    }
    let statistic: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| SimError::InsufficientData(e.to_string()))?;
    Ok(ChiSquareResult { statistic, degrees_of_freedom: dof, p_value: dist.sf(statistic), bins: observed.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_histograms_have_zero_distance() {
        let h = Histogram::from_counts(vec![5, 3, 2]);
        let c = compare_histograms(&h, &h).unwrap();
        assert_eq!(c.total_variation, 0.0);
        assert_eq!(c.max_abs_z, 0.0);
    }

    #[test]
    fn disjoint_histograms_have_unit_distance() {
        let a = Histogram::from_counts(vec![4]);
        let b = Histogram::from_counts(vec![0, 7]);
        assert!((total_variation(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_rejected() {
        let h = Histogram::new();
        assert_eq!(total_variation(&h, &h), Err(SimError::EmptyHistogram));
    }

    #[test]
    fn tv_to_exact_distribution() {
        let h = Histogram::from_counts(vec![1, 1, 2]);
        assert!(tv_to_distribution(&h, &[0.25, 0.25, 0.5]).unwrap().abs() < 1e-15);
        assert!((tv_to_distribution(&h, &[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x).unwrap() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn chi_square_exact_fit() {
        let h = Histogram::from_counts(vec![500, 300, 200]);
        let pmf = |k: usize| [0.5, 0.3, 0.2].get(k).copied().unwrap_or(0.0);
        let r = chi_square_gof(&h, pmf).unwrap();
        assert!(r.statistic.abs() < 1e-9);
        assert!(r.p_value > 0.999);
        let bad = Histogram::from_counts(vec![300, 300, 400]);
        assert!(chi_square_gof(&bad, pmf).unwrap().p_value < 1e-10);
    }
}
