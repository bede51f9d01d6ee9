//! Stationary queue length at departure epochs.
//!
//! L⁺(z) = (1−θ)(1−z) / (1 − z e^{θ(1−z)}) is inverted through the tail sums
//!
//! ```text
//! φ_{−1} = 1,   φ_k = (1−θ) Σ_{j≥1} (jθ)^{k+j} e^{−jθ} / (k+j)!,   π_k = φ_{k−1} − φ_k.
//! ```
//!
//! Each summand is a Poisson probability Pr{Poisson(jθ) = k+j}, evaluated in log
//! space. φ_k is exactly Pr{L⁺ > k}, so the tail beyond the truncation point is
//! known rather than guessed.

use serde::Serialize;

use super::{as_f64, AnalyticError, Load};
use crate::scalar::{CompensatedSum, Real};
use crate::special::{lambert_w_minus1_conjugate, poisson_ln_pmf};

/// Deliberate corruption of the series, used to check that verification catches it.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFault {
    /// Negates the j = 1 summand of φ_k for every k ≥ 1.
    FlipPhiSign,
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Summand budget for a single φ_k.
    pub max_terms: usize,
    /// Largest queue length the vector may grow to.
    pub max_states: usize,
    #[doc(hidden)]
    pub fault: Option<SeriesFault>,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { max_terms: 10_000_000, max_states: 100_000, fault: None }
    }
}

/// One tail sum φ_k with a rigorous bound on the discarded remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiTerm<T> {
    pub value: T,
    pub remainder_bound: T,
    pub terms: usize,
}

/// Computes φ_k.
///
/// The summand ratio t_{j+1}/t_j = θe^{−θ}·(j+1)/(k+j+1)·(1+1/j)^{k+j} is bounded for all
/// later j by θe^{1−θ}·(1+1/j)^k·(j+1)/(k+j+1), which decreases in j toward θe^{1−θ} < 1.
/// Once that bound r̄ drops below one the remainder is at most t_j·r̄/(1−r̄).
pub fn phi<T: Real>(load: Load<T>, k: usize, options: &SeriesOptions) -> Result<PhiTerm<T>, AnalyticError> {
    let theta = load.value();
    let asymptotic_ratio = theta * (T::one() - theta).exp();
    let kf = T::count(k);
    let rel = T::epsilon() * T::lit(0.5);
    let mut acc = CompensatedSum::new();
    for j in 1..=options.max_terms {
        let jf = T::count(j);
        let mut term = poisson_ln_pmf(k + j, jf * theta).exp();
        if j == 1 && k >= 1 && options.fault == Some(SeriesFault::FlipPhiSign) {
            term = -term;
        }
        acc.add(term);

        let excess = (kf * jf.recip().ln_1p() - (kf / (jf + T::one())).ln_1p()).exp();
        let ratio = asymptotic_ratio * excess;
        if ratio < T::one() {
            let remainder = term.abs() * ratio / (T::one() - ratio);
            if remainder <= rel * acc.value().abs() {
                let slack = load.slack();
                return Ok(PhiTerm { value: slack * acc.value(), remainder_bound: slack * remainder, terms: j });
            }
        }
    }
    Err(AnalyticError::SeriesBudget { k, terms: options.max_terms })
}

/// Queue-length distribution π_0..π_N at departure epochs (and, by the epoch
/// equivalence, at block boundaries).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution<T> {
    pub theta: T,
    pub probabilities: Vec<T>,
    /// N: the last stored index.
    pub truncation: usize,
    /// Upper bound on Pr{L⁺ > N}.
    pub tail_mass_bound: T,
    /// 1/z*, the asymptotic ratio π_{k+1}/π_k.
    pub decay_rate: T,
    /// Largest discarded-summand bound over all φ_k.
    pub series_remainder_bound: T,
}

impl<T: Real> StationaryDistribution<T> {
    pub fn pi(&self, k: usize) -> Option<T> {
        self.probabilities.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn total_mass(&self) -> T {
        crate::scalar::compensated_sum(self.probabilities.iter().copied())
    }

    /// Σ k π_k over the stored states.
    pub fn mean(&self) -> T {
        crate::scalar::compensated_sum(self.probabilities.iter().enumerate().map(|(k, &p)| T::count(k) * p))
    }

    /// Σ π_k z^k over the stored states.
    pub fn pgf_series(&self, z: T) -> T {
        self.probabilities.iter().rev().fold(T::zero(), |acc, &p| acc * z + p)
    }
}

/// Dominant singularity z* of L⁺(z).
fn singularity<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    Ok(lambert_w_minus1_conjugate(load.value())?)
}

/// Asymptotic geometric decay rate 1/z* of π_k.
pub fn decay_rate<T: Real>(load: Load<T>) -> Result<T, AnalyticError> {
    Ok(singularity(load)?.recip())
}

/// L⁺(z) for real z with |z| < z*.
pub fn stationary_pgf<T: Real>(load: Load<T>, z: T) -> Result<T, AnalyticError> {
    let radius = singularity(load)?;
    if !(z.abs() < radius) {
        return Err(AnalyticError::OutsideRadius { z: as_f64(z), radius: as_f64(radius) });
    }
    let theta = load.value();
    let slack = load.slack();
    let u = z - T::one();
    if u.abs() < T::lit(1e-8) {
        // 1 − z e^{−θu} = −u[(1−θ) + u(θ²/2 − θ)] + O(u³)
        return Ok(slack / (slack + u * (theta * theta / T::lit(2.0) - theta)));
    }
    let denominator = -u - z * (-theta * u).exp_m1();
    Ok(-slack * u / denominator)
}

/// π_0..π_N from the φ-series with Pr{L⁺ > N} ≤ `tail_tol`.
pub fn stationary_distribution<T: Real>(load: Load<T>, tail_tol: T) -> Result<StationaryDistribution<T>, AnalyticError> {
    stationary_distribution_with(load, tail_tol, &SeriesOptions::default())
}

pub fn stationary_distribution_with<T: Real>(
    load: Load<T>,
    tail_tol: T,
    options: &SeriesOptions,
) -> Result<StationaryDistribution<T>, AnalyticError> {
    if !(tail_tol > T::zero() && tail_tol <= T::lit(1e-3)) {
        return Err(AnalyticError::TailTolerance(as_f64(tail_tol)));
    }
    let theta = load.value();
    let slack = load.slack();
    let decay = decay_rate(load)?;

    // Geometric certificate: smallest N with (1−θ) d^N / (1−d) < tail_tol.
    let guess = ((tail_tol * (T::one() - decay) / slack).ln() / decay.ln()).ceil();
    let mut truncation = guess.to_usize().unwrap_or(1).max(1);
    if truncation > options.max_states {
        return Err(AnalyticError::TruncationBudget(options.max_states));
    }

    let mut phis: Vec<PhiTerm<T>> = Vec::with_capacity(truncation + 1);
    for k in 0..=truncation {
        phis.push(phi(load, k, options)?);
    }
    // The certificate is asymptotic; confirm it against the exact tail φ_N.
    while {
        let last = phis[truncation];
        last.value + last.remainder_bound > tail_tol
    } {
        truncation += 1;
        if truncation > options.max_states {
            return Err(AnalyticError::TruncationBudget(options.max_states));
        }
        phis.push(phi(load, truncation, options)?);
    }

    let pi0 = T::one() - phis[0].value;
    let pi0_tol = T::lit(1e-10).max(T::lit(1e4) * T::epsilon());
    if (pi0 - slack).abs() > pi0_tol {
        return Err(AnalyticError::ZeroStateMismatch { computed: as_f64(pi0), expected: as_f64(slack) });
    }

    let mut probabilities = Vec::with_capacity(truncation + 1);
    probabilities.push(pi0);
    for k in 1..=truncation {
        probabilities.push(phis[k - 1].value - phis[k].value);
    }
    let series_remainder_bound = phis.iter().map(|p| p.remainder_bound).fold(T::zero(), T::max);
    let last = phis[truncation];

    Ok(StationaryDistribution {
        theta,
        probabilities,
        truncation,
        tail_mass_bound: last.value + last.remainder_bound,
        decay_rate: decay,
        series_remainder_bound,
    })
}
