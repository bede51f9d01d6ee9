//! Truncated embedded Markov chain, solved numerically as an independent check
//! on the series inversion.
//!
//! The departure-epoch chain obeys L⁺_{n+1} = max(L⁺_n − 1, 0) + T_{n+1}, so its
//! transition matrix is upper Hessenberg with rows 0 and 1 identical. States
//! beyond N are folded into column N.

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{decay_rate, AnalyticError, Load};
use crate::scalar::{CompensatedSum, Real};
use crate::special::{poisson_pmf, regularized_gamma_lower, SpecialError};

/// Smallest chain the oracle will build.
pub const MIN_DIMENSION: usize = 10;
/// Default bound on the stationary mass the truncation may cut off.
pub const DEFAULT_CHAIN_TAIL_TOL: f64 = 1e-12;
/// Above this size [`SolveMethod::Auto`] switches from the direct solve to power iteration.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("chain dimension N = {requested} is too small; use N ≥ {suggested}")]
    DimensionTooSmall { requested: usize, suggested: usize },
    #[error("stationary tolerance must be positive and at most 1e-8, got {0}")]
    Tolerance(f64),
    #[error("power iteration stopped after {iterations} iterations with residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Row-stochastic (N+1)×(N+1) transition matrix of the departure-epoch chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedChain<T> {
    pub theta: T,
    pub dimension: usize,
    /// Row-major, (N+1)² entries.
    matrix: Vec<T>,
}

impl<T: Real> TruncatedChain<T> {
    /// Number of states, N + 1.
    pub fn states(&self) -> usize {
        self.dimension + 1
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.matrix[row * self.states() + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let n = self.states();
        &self.matrix[row * n..(row + 1) * n]
    }

    /// x·P
    pub fn left_multiply(&self, x: &[T]) -> Vec<T> {
        let n = self.states();
        let mut out = vec![T::zero(); n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == T::zero() {
                continue;
            }
            // Row i is zero left of column i − 1.
            let start = i.saturating_sub(1);
            for j in start..n {
                out[j] = out[j] + xi * self.matrix[i * n + j];
            }
        }
        out
    }

    /// ‖xP − x‖∞
    pub fn residual(&self, x: &[T]) -> T {
        self.left_multiply(x)
            .iter()
            .zip(x)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

fn suggested_dimension<T: Real>(load: Load<T>, tail_tol: T) -> Result<usize, ChainError> {
    let d = decay_rate(load)?;
    let n = ((tail_tol * (T::one() - d) / load.slack()).ln() / d.ln()).ceil();
    Ok(n.to_usize().unwrap_or(usize::MAX).max(MIN_DIMENSION))
}

/// Builds the chain on states 0..=N with the default tail tolerance.
pub fn build_chain<T: Real>(load: Load<T>, dimension: usize) -> Result<TruncatedChain<T>, ChainError> {
    build_chain_with_tolerance(load, dimension, T::lit(DEFAULT_CHAIN_TAIL_TOL))
}

/// Builds the chain, rejecting N when the geometric tail estimate of the stationary
/// mass beyond N exceeds `tail_tol`.
pub fn build_chain_with_tolerance<T: Real>(
    load: Load<T>,
    dimension: usize,
    tail_tol: T,
) -> Result<TruncatedChain<T>, ChainError> {
    let suggested = suggested_dimension(load, tail_tol)?;
    if dimension < MIN_DIMENSION || dimension < suggested {
        return Err(ChainError::DimensionTooSmall { requested: dimension, suggested });
    }
    let theta = load.value();
    let n = dimension + 1;
    let pmf: Vec<T> = (0..n).map(|k| poisson_pmf(k, theta)).collect();
    let mut matrix = vec![T::zero(); n * n];
    for i in 0..n {
        // Row 0 behaves like row 1: an empty queue waits for the next arrival.
        let shift = i.max(1) - 1;
        for j in shift..dimension {
            matrix[i * n + j] = pmf[j - shift];
        }
        // Pr{T ≥ N − shift} into the last column.
        matrix[i * n + dimension] = regularized_gamma_lower((dimension - shift) as u32, theta)?;
    }
    Ok(TruncatedChain { theta, dimension, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Direct for N ≤ 2000, power iteration beyond.
    Auto,
    /// Grassmann–Taksar–Heyman elimination (subtraction-free).
    Direct,
    /// Power iteration from the uniform vector.
    PowerIteration { max_iterations: usize },
}

/// Stationary vector of a truncated chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSolution<T> {
    pub probabilities: Vec<T>,
    /// ‖π̂P − π̂‖∞
    pub residual: T,
    pub iterations: usize,
    pub method: SolveMethod,
}

pub fn stationary_solve<T: Real>(chain: &TruncatedChain<T>, tol: T) -> Result<ChainSolution<T>, ChainError> {
    stationary_solve_with(chain, tol, SolveMethod::Auto)
}

pub fn stationary_solve_with<T: Real>(
    chain: &TruncatedChain<T>,
    tol: T,
    method: SolveMethod,
) -> Result<ChainSolution<T>, ChainError> {
    if !(tol > T::zero() && tol <= T::lit(1e-8)) {
        return Err(ChainError::Tolerance(tol.to_f64().unwrap_or(f64::NAN)));
    }
    let method = match method {
        SolveMethod::Auto if chain.dimension <= DIRECT_SOLVE_LIMIT => SolveMethod::Direct,
        SolveMethod::Auto => SolveMethod::PowerIteration { max_iterations: 1_000_000 },
        m => m,
    };
    let (probabilities, iterations) = match method {
        SolveMethod::Direct => (gth(chain), 1),
        SolveMethod::PowerIteration { max_iterations } => power_iteration(chain, tol, max_iterations)?,
        SolveMethod::Auto => unreachable!(),
    };
    let residual = chain.residual(&probabilities);
    if !(residual < tol) {
        return Err(ChainError::NonConvergence { iterations, residual: residual.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(ChainSolution { probabilities, residual, iterations, method })
}

/// GTH state reduction. Only nonzero pivot-row entries generate updates, so the
/// Hessenberg structure keeps this O(N²).
fn gth<T: Real>(chain: &TruncatedChain<T>) -> Vec<T> {
    let n = chain.states();
    let mut a = chain.matrix.clone();
    for m in (1..n).rev() {
        let mut out = CompensatedSum::new();
        for j in 0..m {
            out.add(a[m * n + j]);
        }
        let s = out.value();
        for i in 0..m {
            a[i * n + m] = a[i * n + m] / s;
        }
        for j in 0..m {
            let pivot = a[m * n + j];
            if pivot == T::zero() {
                continue;
            }
            for i in 0..m {
                a[i * n + j] = a[i * n + j] + a[i * n + m] * pivot;
            }
        }
    }
    let mut pi = vec![T::zero(); n];
    pi[0] = T::one();
    for j in 1..n {
        let mut acc = CompensatedSum::new();
        for i in 0..j {
            acc.add(pi[i] * a[i * n + j]);
        }
        pi[j] = acc.value();
    }
    let total = crate::scalar::compensated_sum(pi.iter().copied());
    pi.iter().map(|&p| p / total).collect()
}

/// Stops once ‖π̂P − π̂‖∞ < tol and the L1 step is below tol/10.
fn power_iteration<T: Real>(chain: &TruncatedChain<T>, tol: T, max_iterations: usize) -> Result<(Vec<T>, usize), ChainError> {
    let n = chain.states();
    let mut pi = vec![T::count(n).recip(); n];
    let mut last_residual = T::infinity();
    for it in 1..=max_iterations {
        let mut next = chain.left_multiply(&pi);
        let total = crate::scalar::compensated_sum(next.iter().copied());
        for p in next.iter_mut() {
            *p = *p / total;
        }
        let step: T = crate::scalar::compensated_sum(next.iter().zip(&pi).map(|(&a, &b)| (a - b).abs()));
        last_residual = pi.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);
        pi = next;
        if last_residual < tol && step < tol / T::lit(10.0) {
            return Ok((pi, it));
        }
    }
    Err(ChainError::NonConvergence {
        iterations: max_iterations,
        residual: last_residual.to_f64().unwrap_or(f64::NAN),
    })
}
