//! Distributions behind the vestige time.
//!
//! For k ≥ 1, U_k = L_p − S_k is what is left of a packet after k blocks and
//! U_k⁺ is U_k conditioned to be positive. For a packet finished inside its first
//! block, V₀ = L_p/s and V₀⁻ is V₀ conditioned on V₀ < 1.

use serde::Serialize;

use super::{as_f64, AnalyticError, Load};
use crate::scalar::Real;
use crate::special::{regularized_gamma_lower, regularized_gamma_upper};

/// Whether the V₀ CDF is conditioned on the packet finishing within the block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    /// F_{V₀}(x) = e^{−θ/x}, x > 0.
    Unconditioned,
    /// F_{V₀⁻}(x) = e^{θ(1 − 1/x)}, 0 < x ≤ 1.
    WithinBlock,
}

/// CDF of the single-block vestige V₀ (or V₀⁻).
pub fn vestige_cdf_v0<T: Real>(load: Load<T>, x: T, conditioning: Conditioning) -> Result<T, AnalyticError> {
    let theta = load.value();
    match conditioning {
        Conditioning::Unconditioned => {
            if !(x > T::zero()) {
                return Err(AnalyticError::OutOfSupport { value: as_f64(x), support: "x > 0" });
            }
            Ok((-theta / x).exp())
        }
        Conditioning::WithinBlock => {
            if !(x > T::zero() && x <= T::one()) {
                return Err(AnalyticError::OutOfSupport { value: as_f64(x), support: "0 < x ≤ 1" });
            }
            Ok((theta * (T::one() - x.recip())).exp())
        }
    }
}

/// Packet size and mean block service, with θ = L_p/ν.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VestigeModel<T> {
    pub load: Load<T>,
    pub packet_size: T,
    pub nu: T,
}

impl<T: Real> VestigeModel<T> {
    pub fn new(packet_size: T, nu: T) -> Result<Self, AnalyticError> {
        if !(packet_size > T::zero() && nu > T::zero()) {
            return Err(AnalyticError::InconsistentModel(format!(
                "packet size {packet_size} and ν {nu} must be positive"
            )));
        }
        Ok(Self { load: Load::new(packet_size / nu)?, packet_size, nu })
    }

    /// Model with ν = `nu` and L_p = θν.
    pub fn from_load(load: Load<T>, nu: T) -> Result<Self, AnalyticError> {
        Self::new(load.value() * nu, nu)
    }

    /// F_{U_k}(x) = Q(k, (L_p − x)/ν) for x < L_p.
    pub fn uk_cdf(&self, k: u32, x: T) -> Result<T, AnalyticError> {
        if !(x < self.packet_size) {
            return Err(AnalyticError::OutOfSupport { value: as_f64(x), support: "x < L_p" });
        }
        Ok(regularized_gamma_upper(k, (self.packet_size - x) / self.nu)?)
    }

    /// F_{U_k⁺}(x) = (Q(k, (L_p − x)/ν) − Q(k, θ)) / P(k, θ) for 0 < x < L_p.
    pub fn uk_positive_cdf(&self, k: u32, x: T) -> Result<T, AnalyticError> {
        if !(x > T::zero() && x < self.packet_size) {
            return Err(AnalyticError::OutOfSupport { value: as_f64(x), support: "0 < x < L_p" });
        }
        let theta = self.load.value();
        let at_x = regularized_gamma_upper(k, (self.packet_size - x) / self.nu)?;
        let at_zero = regularized_gamma_upper(k, theta)?;
        Ok((at_x - at_zero) / regularized_gamma_lower(k, theta)?)
    }

    pub fn v0_cdf(&self, x: T, conditioning: Conditioning) -> Result<T, AnalyticError> {
        vestige_cdf_v0(self.load, x, conditioning)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Load<f64> {
        Load::new(0.5).unwrap()
    }

    #[test]
    fn v0_cdf_values() {
        assert_eq!(vestige_cdf_v0(half(), 1.0, Conditioning::WithinBlock).unwrap(), 1.0);
        let u = vestige_cdf_v0(half(), 1.0, Conditioning::Unconditioned).unwrap();
        assert!((u - (-0.5f64).exp()).abs() < 1e-15);
        let u = vestige_cdf_v0(half(), 0.5, Conditioning::Unconditioned).unwrap();
        assert!((u - (-1.0f64).exp()).abs() < 1e-15);
        assert!(vestige_cdf_v0(half(), 3.0, Conditioning::Unconditioned).is_ok());
    }

    #[test]
    fn conditioned_v0_is_rescaled_unconditioned() {
        for i in 1..=20 {
            let x = i as f64 / 20.0;
            let c = vestige_cdf_v0(half(), x, Conditioning::WithinBlock).unwrap();
            let u = vestige_cdf_v0(half(), x, Conditioning::Unconditioned).unwrap();
            assert!((c - u / (-0.5f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn v0_rejects_out_of_support() {
        assert!(vestige_cdf_v0(half(), 0.0, Conditioning::Unconditioned).is_err());
        assert!(vestige_cdf_v0(half(), -1.0, Conditioning::WithinBlock).is_err());
        assert!(vestige_cdf_v0(half(), 1.5, Conditioning::WithinBlock).is_err());
    }

    #[test]
    fn uk_cdf_values() {
        let m = VestigeModel::from_load(half(), 2.0).unwrap();
        assert_eq!(m.packet_size, 1.0);
        let at = m.uk_cdf(1, m.packet_size / 2.0).unwrap();
        assert!((at - (-0.25f64).exp()).abs() < 1e-15);
        assert!((m.uk_cdf(3, m.packet_size * (1.0 - 1e-12)).unwrap() - 1.0).abs() < 1e-9);
        assert!(m.uk_cdf(2, m.packet_size).is_err());
        assert!(m.uk_cdf(2, -50.0).unwrap() < 1e-9);
    }

    #[test]
    fn uk_positive_cdf_endpoints() {
        let m = VestigeModel::from_load(half(), 1.0).unwrap();
        for k in 1..5 {
            assert!(m.uk_positive_cdf(k, 1e-12).unwrap().abs() < 1e-9);
            assert!((m.uk_positive_cdf(k, m.packet_size * (1.0 - 1e-12)).unwrap() - 1.0).abs() < 1e-9);
        }
        assert!(m.uk_positive_cdf(1, 0.0).is_err());
        assert!(m.uk_positive_cdf(1, 0.5).is_err());
    }

    #[test]
    fn model_checks_consistency() {
        assert!(VestigeModel::new(0.5f64, 1.0).is_ok());
        assert!(VestigeModel::new(2.0f64, 1.0).is_err());
        assert!(VestigeModel::new(-1.0f64, 1.0).is_err());
    }
}
