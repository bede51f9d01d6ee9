use serde::Serialize;

use super::SimError;
use crate::channel::{CapacityMode, ChannelParams, TrafficParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Nats in the buffer, exponential (or exact-capacity) service per block.
    Continuous,
    /// Embedded D/G/1 chain with Poisson(θ) service times.
    Discrete,
}

/// What drives the queue: a bare load, or full physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Workload {
    /// θ with ν = 1 nat and L_p = θ.
    Load(f64),
    Physical { channel: ChannelParams<f64>, traffic: TrafficParams<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub engine: Engine,
    pub capacity_mode: CapacityMode,
    pub workload: Workload,
    /// Total blocks simulated, warmup included.
    pub num_blocks: u64,
    pub warmup_blocks: u64,
    pub seed: u64,
    pub replications: usize,
}

/// max(10⁴, 10/(1−θ)²) blocks; 10⁴ for θ ≥ 1.
pub fn default_warmup(theta: f64) -> u64 {
    if theta >= 1.0 {
        return 10_000;
    }
    let relax = 10.0 / ((1.0 - theta) * (1.0 - theta));
    (relax.ceil() as u64).max(10_000)
}

impl SimConfig {
    /// Low-SNR configuration with ν = 1 and the default warmup added on top of `post_warmup_blocks`.
    pub fn for_load(engine: Engine, theta: f64, post_warmup_blocks: u64, seed: u64) -> Self {
        let warmup = default_warmup(theta);
        Self {
            engine,
            capacity_mode: CapacityMode::LowSnr,
            workload: Workload::Load(theta),
            num_blocks: post_warmup_blocks + warmup,
            warmup_blocks: warmup,
            seed,
            replications: 1,
        }
    }

    pub fn theta(&self) -> f64 {
        match self.workload {
            Workload::Load(t) => t,
            Workload::Physical { traffic, .. } => traffic.load,
        }
    }

    /// Mean per-block service ν (nats).
    pub fn nu(&self) -> f64 {
        match self.workload {
            Workload::Load(_) => 1.0,
            Workload::Physical { channel, .. } => channel.nu(),
        }
    }

    /// L_p (nats).
    pub fn packet_size(&self) -> f64 {
        match self.workload {
            Workload::Load(t) => t,
            Workload::Physical { traffic, .. } => traffic.packet_size,
        }
    }

    /// Channel used by the block sampler.
    pub fn channel(&self) -> ChannelParams<f64> {
        match self.workload {
            Workload::Load(_) => ChannelParams { bandwidth: 1.0, block_length: 1.0, snr: 1.0, link: None },
            Workload::Physical { channel, .. } => channel,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let theta = self.theta();
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(SimError::Config(format!("load must be positive and finite, got θ = {theta}")));
        }
        if self.num_blocks <= self.warmup_blocks {
            return Err(SimError::Config(format!(
                "num_blocks ({}) must exceed warmup_blocks ({})",
                self.num_blocks, self.warmup_blocks
            )));
        }
        if self.replications == 0 {
            return Err(SimError::Config("replications must be at least 1".into()));
        }
        match (self.engine, self.capacity_mode) {
            (Engine::Discrete, CapacityMode::Exact) => {
                Err(SimError::Config("the discrete engine draws Poisson service times; exact capacity needs the continuous engine".into()))
            }
            (Engine::Continuous, CapacityMode::Exact) if self.channel().link.is_none() => {
                Err(SimError::Channel(crate::channel::ChannelError::MissingNoisePsd))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warmup_rule() {
        assert_eq!(default_warmup(0.5), 10_000);
        assert_eq!(default_warmup(0.99), 100_000);
        assert_eq!(default_warmup(1.3), 10_000);
    }

    #[test]
    fn validation() {
        let mut c = SimConfig::for_load(Engine::Continuous, 0.5, 1000, 1);
        assert!(c.validate().is_ok());
        c.capacity_mode = CapacityMode::Exact;
        assert!(matches!(c.validate(), Err(SimError::Channel(_))));
        c.engine = Engine::Discrete;
        assert!(matches!(c.validate(), Err(SimError::Config(_))));
        let mut c = SimConfig::for_load(Engine::Discrete, 0.5, 1000, 1);
        c.warmup_blocks = c.num_blocks;
        assert!(c.validate().is_err());
        let c = SimConfig::for_load(Engine::Discrete, 0.0, 1000, 1);
        assert!(c.validate().is_err());
        let mut c = SimConfig::for_load(Engine::Discrete, 0.5, 1000, 1);
        c.replications = 0;
        assert!(c.validate().is_err());
    }
}
