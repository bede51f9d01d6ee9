//! Physical-layer model: block Rayleigh fading in the low-SNR regime.
//!
//! All information quantities are in nats. In one block of length `T_B` the
//! channel offers `s = c·T_B` nats; with ρ the average received SNR the
//! low-SNR approximation makes `s` exponential with mean ν = W·T_B·ρ.

use rand_core::RngCore;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;
use crate::special::ln_factorial;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{field} must be strictly positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("supplied SNR {supplied} disagrees with link budget SNR {derived}")]
    SnrMismatch { supplied: f64, derived: f64 },
    #[error("exact capacity sampling needs the full link budget (noise PSD N0 was not supplied)")]
    MissingNoisePsd,
}

fn positive<T: Real>(field: &'static str, value: T) -> Result<T, ChannelError> {
    if value > T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(ChannelError::NonPositive { field, value: value.to_f64().unwrap_or(f64::NAN) })
    }
}

/// Which capacity law drives the per-block service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMode {
    /// ln(1 + x) ≈ x: exponential per-block service.
    LowSnr,
    /// Shannon capacity W ln(1 + γ P d^{−α}/(W N0)).
    Exact,
}

/// Transmit power, noise and propagation constants (SI units, power in watts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget<T> {
    pub tx_power: T,
    pub noise_psd: T,
    pub distance: T,
    pub pathloss_exponent: T,
    /// σ² of the Rayleigh component; the power gain is exponential with mean 2σ².
    pub rayleigh_sigma2: T,
}

impl<T: Real> LinkBudget<T> {
    pub fn new(tx_power: T, noise_psd: T, distance: T, pathloss_exponent: T, rayleigh_sigma2: T) -> Result<Self, ChannelError> {
        Ok(Self {
            tx_power: positive("tx_power", tx_power)?,
            noise_psd: positive("noise_psd", noise_psd)?,
            distance: positive("distance", distance)?,
            pathloss_exponent: positive("pathloss_exponent", pathloss_exponent)?,
            rayleigh_sigma2: positive("rayleigh_sigma2", rayleigh_sigma2)?,
        })
    }

    /// Link budget whose noise PSD is chosen so that the average SNR over `bandwidth` equals `snr`.
    pub fn with_noise_for_snr(
        tx_power: T,
        distance: T,
        pathloss_exponent: T,
        rayleigh_sigma2: T,
        bandwidth: T,
        snr: T,
    ) -> Result<Self, ChannelError> {
        let snr = positive("snr", snr)?;
        let bandwidth = positive("bandwidth", bandwidth)?;
        let gain = T::lit(2.0) * rayleigh_sigma2 * tx_power / distance.powf(pathloss_exponent);
        Self::new(tx_power, gain / (bandwidth * snr), distance, pathloss_exponent, rayleigh_sigma2)
    }

    /// ρ = 2σ²P / (W N0 d^α).
    pub fn snr(&self, bandwidth: T) -> T {
        T::lit(2.0) * self.rayleigh_sigma2 * self.tx_power
            / (bandwidth * self.noise_psd * self.distance.powf(self.pathloss_exponent))
    }
}

/// Channel constants with the SNR either supplied directly or derived from a link budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams<T> {
    pub bandwidth: T,
    pub block_length: T,
    pub snr: T,
    pub link: Option<LinkBudget<T>>,
}

impl<T: Real> ChannelParams<T> {
    pub fn from_snr(bandwidth: T, block_length: T, snr: T) -> Result<Self, ChannelError> {
        Ok(Self {
            bandwidth: positive("bandwidth", bandwidth)?,
            block_length: positive("block_length", block_length)?,
            snr: positive("snr", snr)?,
            link: None,
        })
    }

    pub fn from_link_budget(bandwidth: T, block_length: T, link: LinkBudget<T>) -> Result<Self, ChannelError> {
        let bandwidth = positive("bandwidth", bandwidth)?;
        let snr = positive("snr", link.snr(bandwidth))?;
        Ok(Self { bandwidth, block_length: positive("block_length", block_length)?, snr, link: Some(link) })
    }

    /// Both routes at once; the supplied SNR must match the link budget to 1e−12 relative.
    pub fn with_snr_and_link(bandwidth: T, block_length: T, snr: T, link: LinkBudget<T>) -> Result<Self, ChannelError> {
        let derived = Self::from_link_budget(bandwidth, block_length, link)?;
        let snr = positive("snr", snr)?;
        if ((snr - derived.snr) / derived.snr).abs() > T::lit(1e-12) {
            return Err(ChannelError::SnrMismatch {
                supplied: snr.to_f64().unwrap_or(f64::NAN),
                derived: derived.snr.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(derived)
    }

    /// Mean per-block service ν = W·T_B·ρ in nats.
    pub fn nu(&self) -> T {
        self.bandwidth * self.block_length * self.snr
    }

    /// Low-SNR AWGN-equivalent capacity C_a = W·ρ in nats/s.
    pub fn awgn_capacity(&self) -> T {
        self.bandwidth * self.snr
    }
}

/// Constant-rate source feeding one packet per block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrafficParams<T> {
    /// R in nats/s.
    pub rate: T,
    /// L_p = R·T_B in nats.
    pub packet_size: T,
    /// θ = L_p/ν.
    pub load: T,
}

/// Resolves a source rate against a channel: L_p = R·T_B and θ = L_p/ν = R/(W·ρ).
pub fn derive_params<T: Real>(channel: &ChannelParams<T>, rate: T) -> Result<TrafficParams<T>, ChannelError> {
    let rate = positive("rate", rate)?;
    Ok(TrafficParams {
        rate,
        packet_size: rate * channel.block_length,
        // R/(Wρ) rather than L_p/ν: one rounding instead of three.
        load: rate / channel.awgn_capacity(),
    })
}

/// CDF of the service offered in one block: 1 − e^{−x/ν}.
pub fn service_cdf<T: Real>(x: T, channel: &ChannelParams<T>) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    -(-x / channel.nu()).exp_m1()
}

/// CDF of the instantaneous capacity (nats/s).
pub fn capacity_cdf<T: Real>(x: T, channel: &ChannelParams<T>, mode: CapacityMode) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let exponent = match mode {
        CapacityMode::LowSnr => x / channel.awgn_capacity(),
        CapacityMode::Exact => (x / channel.bandwidth).exp_m1() / channel.snr,
    };
    -(-exponent).exp_m1()
}

/// Density of S_k, the service offered by k consecutive blocks: Gamma(k, ν).
pub fn cumulative_service_pdf<T: Real>(k: u32, x: T, channel: &ChannelParams<T>) -> T {
    let nu = channel.nu();
    if k == 0 || x < T::zero() {
        return T::zero();
    }
    if x == T::zero() {
        return if k == 1 { nu.recip() } else { T::zero() };
    }
    let y = x / nu;
    let km1 = T::count(k as usize - 1);
    (km1 * y.ln() - y - ln_factorial::<T>(k as usize - 1)).exp() / nu
}

/// Uniform variate in [0, 1) from the top 53 bits of a 64-bit draw.
#[inline]
pub fn unit_uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Service (nats) offered by one block, driven by a single uniform `u ∈ [0, 1)`.
///
/// Both modes invert the exponential CDF of the same uniform, so switching the mode
/// under a fixed random stream gives common-random-number comparisons.
pub fn block_service_from_uniform(u: f64, channel: &ChannelParams<f64>, mode: CapacityMode) -> Result<f64, ChannelError> {
    let e = -(-u).ln_1p();
    match mode {
        CapacityMode::LowSnr => Ok(channel.nu() * e),
        CapacityMode::Exact => {
            let link = channel.link.as_ref().ok_or(ChannelError::MissingNoisePsd)?;
            let gamma = 2.0 * link.rayleigh_sigma2 * e;
            let received = gamma * link.tx_power * link.distance.powf(-link.pathloss_exponent)
                / (channel.bandwidth * link.noise_psd);
            Ok(channel.bandwidth * channel.block_length * received.ln_1p())
        }
    }
}

/// Draws the service offered by one block.
pub fn sample_block_service<R: RngCore + ?Sized>(
    rng: &mut R,
    channel: &ChannelParams<f64>,
    mode: CapacityMode,
) -> Result<f64, ChannelError> {
    if mode == CapacityMode::Exact && channel.link.is_none() {
        return Err(ChannelError::MissingNoisePsd);
    }
    block_service_from_uniform(unit_uniform(rng), channel, mode)
}
