//! Reduces the operating-point flags to θ (and, when given, the physical channel).

use fadeq::channel::{derive_params, ChannelParams, LinkBudget, TrafficParams};
use serde_json::{json, Value};

use crate::args::OperatingPoint;
use crate::error::CliError;

pub const DEFAULT_BANDWIDTH: f64 = 5e3;
pub const DEFAULT_BLOCK: f64 = 1e-4;
pub const DEFAULT_TX_POWER: f64 = 0.1;
pub const DEFAULT_DISTANCE: f64 = 1000.0;
pub const DEFAULT_ALPHA: f64 = 4.0;
pub const DEFAULT_SIGMA2: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub theta: f64,
    pub physical: Option<(ChannelParams<f64>, TrafficParams<f64>)>,
}

impl OperatingPoint {
    fn channel_given(&self) -> bool {
        self.bandwidth.is_some()
            || self.block.is_some()
            || self.rho.is_some()
            || self.tx_power.is_some()
            || self.noise_psd.is_some()
    }

    fn link_modifier_given(&self) -> bool {
        self.distance.is_some() || self.alpha.is_some() || self.sigma2.is_some()
    }

    fn link_with_noise(&self, noise_psd: f64) -> Result<LinkBudget<f64>, CliError> {
        Ok(LinkBudget::new(
            self.tx_power.unwrap_or(DEFAULT_TX_POWER),
            noise_psd,
            self.distance.unwrap_or(DEFAULT_DISTANCE),
            self.alpha.unwrap_or(DEFAULT_ALPHA),
            self.sigma2.unwrap_or(DEFAULT_SIGMA2),
        )?)
    }

    /// Link budget whose noise PSD reproduces `snr`, for exact-capacity runs given only ρ.
    pub fn reference_link(&self, bandwidth: f64, snr: f64) -> Result<LinkBudget<f64>, CliError> {
        Ok(LinkBudget::with_noise_for_snr(
            self.tx_power.unwrap_or(DEFAULT_TX_POWER),
            self.distance.unwrap_or(DEFAULT_DISTANCE),
            self.alpha.unwrap_or(DEFAULT_ALPHA),
            self.sigma2.unwrap_or(DEFAULT_SIGMA2),
            bandwidth,
            snr,
        )?)
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        if let Some(t) = self.theta {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Invalid(format!("--theta must be positive, got {t}")));
            }
        }
        if !self.channel_given() {
            if self.link_modifier_given() {
                return Err(CliError::Invalid(
                    "--distance/--alpha/--sigma2 need a channel (--rho or --noise-psd)".into(),
                ));
            }
            if self.rate.is_some() {
                return Err(CliError::Invalid("--rate needs a channel (--rho or --noise-psd)".into()));
            }
            let theta = self.theta.ok_or_else(|| CliError::Invalid("give --theta or channel flags with --rate".into()))?;
            return Ok(Resolved { theta, physical: None });
        }

        let w = self.bandwidth.unwrap_or(DEFAULT_BANDWIDTH);
        let tb = self.block.unwrap_or(DEFAULT_BLOCK);
        let channel = match (self.rho, self.noise_psd) {
            (Some(rho), Some(n0)) => ChannelParams::with_snr_and_link(w, tb, rho, self.link_with_noise(n0)?)?,
            (None, Some(n0)) => ChannelParams::from_link_budget(w, tb, self.link_with_noise(n0)?)?,
            (Some(rho), None) => ChannelParams::from_snr(w, tb, rho)?,
            (None, None) => {
                return Err(CliError::Invalid("a channel needs --rho or --noise-psd".into()));
            }
        };
        let traffic = match (self.theta, self.rate) {
            (Some(_), Some(_)) => return Err(CliError::Invalid("give either --theta or --rate, not both".into())),
            (None, None) => return Err(CliError::Invalid("give --theta or --rate".into())),
            (None, Some(rate)) => derive_params(&channel, rate)?,
            (Some(theta), None) => TrafficParams {
                rate: theta * channel.awgn_capacity(),
                packet_size: theta * channel.nu(),
                load: theta,
            },
        };
        Ok(Resolved { theta: traffic.load, physical: Some((channel, traffic)) })
    }
}

impl Resolved {
    /// Resolved parameters with explicit units, for reports and manifests.
    pub fn describe(&self) -> Value {
        let Some((ch, tr)) = &self.physical else {
            return json!({ "theta": self.theta });
        };
        let mut v = json!({
            "theta": self.theta,
            "bandwidth_hz": ch.bandwidth,
            "block_length_s": ch.block_length,
            "snr_rho": ch.snr,
            "nu_nats": ch.nu(),
            "awgn_capacity_nats_per_s": ch.awgn_capacity(),
            "rate_nats_per_s": tr.rate,
            "packet_size_nats": tr.packet_size,
        });
        if let Some(link) = &ch.link {
            v["tx_power_w"] = json!(link.tx_power);
            v["noise_psd_w_per_hz"] = json!(link.noise_psd);
            v["distance_m"] = json!(link.distance);
            v["pathloss_exponent"] = json!(link.pathloss_exponent);
            v["rayleigh_sigma2"] = json!(link.rayleigh_sigma2);
        }
        v
    }
}
