//! Closed-form results for the discretized D/G/1 queue.
//!
//! The per-packet service time T (whole blocks) is Poisson(θ). From it follow
//! the stationary queue-length PGF, its series inversion into π_k, the geometric
//! tail rate from the dominant singularity, and the mean delay decomposition
//! E[D] = E[T] + E[W] + E[V].

mod delay;
mod service;
mod stationary;
mod vestige;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;
use crate::special::SpecialError;

pub use delay::{
    mean_delay, mean_delay_closed_form, mean_queue_length, mean_vestige, mean_vestige_by_components,
    vestige_components, vestige_integral, DelayBreakdown, VestigeComponents, VESTIGE_QUADRATURE_TOL,
};
pub use service::{service_pgf, service_pmf, ServiceDistribution};
pub use stationary::{
    decay_rate, phi, stationary_distribution, stationary_distribution_with, stationary_pgf, PhiTerm,
    SeriesFault, SeriesOptions, StationaryDistribution,
};
pub use vestige::{vestige_cdf_v0, Conditioning, VestigeModel};

/// Smallest load the analytic code accepts; the formulas are singular at θ = 0.
pub const MIN_LOAD: f64 = 1e-6;
/// Largest load the analytic code accepts; the queue is critical at θ = 1.
pub const MAX_LOAD: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("load θ = {0} ≥ 1: the queue is unstable and has no stationary distribution")]
    Unstable(f64),
    #[error("load θ = {0} is outside the supported window [{MIN_LOAD}, {MAX_LOAD}]")]
    OutsideWindow(f64),
    #[error("|z| = {z} is on or beyond the PGF singularity z* = {radius}")]
    OutsideRadius { z: f64, radius: f64 },
    #[error("tail tolerance must lie in (0, 1e-3], got {0}")]
    TailTolerance(f64),
    #[error("φ_{k} series did not converge within {terms} terms")]
    SeriesBudget { k: usize, terms: usize },
    #[error("queue-length vector exceeded {0} states before meeting the tail tolerance")]
    TruncationBudget(usize),
    #[error("series gives π₀ = {computed}, expected 1 − θ = {expected}")]
    ZeroStateMismatch { computed: f64, expected: f64 },
    #[error("argument {value} outside the support {support}")]
    OutOfSupport { value: f64, support: &'static str },
    #[error("packet size and mean block service disagree with θ: {0}")]
    InconsistentModel(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Offered load θ = L_p/ν, validated to the stable analytic window.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Load<T>(T);

impl<T: Real> Load<T> {
    pub fn new(theta: T) -> Result<Self, AnalyticError> {
        if theta >= T::one() {
            return Err(AnalyticError::Unstable(as_f64(theta)));
        }
        if !(theta >= T::lit(MIN_LOAD) && theta <= T::lit(MAX_LOAD)) {
            return Err(AnalyticError::OutsideWindow(as_f64(theta)));
        }
        Ok(Self(theta))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// Idle probability 1 − θ.
    #[inline]
    pub fn slack(self) -> T {
        T::one() - self.0
    }
}

impl<T: Real> TryFrom<crate::channel::TrafficParams<T>> for Load<T> {
    type Error = AnalyticError;

    fn try_from(traffic: crate::channel::TrafficParams<T>) -> Result<Self, Self::Error> {
        Self::new(traffic.load)
    }
}
