use serde::Serialize;

use super::Load;
use crate::scalar::Real;
use crate::special::poisson_pmf;

/// Law of the discretized service time T: Poisson with mean θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ServiceDistribution<T> {
    pub load: Load<T>,
}

impl<T: Real> ServiceDistribution<T> {
    pub fn new(load: Load<T>) -> Self {
        Self { load }
    }

    /// p_k = e^{−θ} θ^k / k!
    pub fn pmf(&self, k: usize) -> T {
        poisson_pmf(k, self.load.value())
    }

    /// G(z) = e^{θ(z−1)}
    pub fn pgf(&self, z: T) -> T {
        (self.load.value() * (z - T::one())).exp()
    }

    /// G′(1) = θ.
    pub fn pgf_derivative_at_one(&self) -> T {
        self.load.value()
    }

    pub fn mean(&self) -> T {
        self.load.value()
    }
}

pub fn service_pmf<T: Real>(load: Load<T>, k: usize) -> T {
    ServiceDistribution::new(load).pmf(k)
}

pub fn service_pgf<T: Real>(load: Load<T>, z: T) -> T {
    ServiceDistribution::new(load).pgf(z)
}
