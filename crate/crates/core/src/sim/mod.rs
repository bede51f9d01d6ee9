//! Block-level Monte Carlo simulation of the buffered fading link.
//!
//! Two engines share one counter-based random stream per (seed, replication):
//! [`run_continuous`] moves nats through a FIFO buffer block by block, while
//! [`run_discrete`] draws the integer service times directly and evolves the
//! embedded chain. Both produce a [`SimStats`].
//!
//! Within a block boundary the ordering is fixed: the packet arriving at the end
//! of block n−1 joins the buffer first, then block n's service is drained FIFO.
//! Queue lengths recorded at a departure count the packets left behind.

mod config;
mod continuous;
mod diagnostics;
mod discrete;
mod replicate;
mod rng;
mod stats;

pub use config::{default_warmup, Engine, SimConfig, Workload};
pub use continuous::run_continuous;
pub use diagnostics::{
    chi_square_gof, compare_epochs, compare_histograms, ks_statistic, total_variation, tv_to_distribution,
    ChiSquareResult, EpochComparison,
};
pub use discrete::{poisson_from_uniform, run_discrete};
pub use replicate::{replicate, ReplicateReport};
pub use rng::{CounterRng, StreamKey, LANES};
pub use stats::{
    batch_means, Histogram, MetricEstimate, SimMetadata, SimStats, SimSummary, WorkLedger, DEFAULT_BATCHES,
    HISTOGRAM_CAP, Z95,
};

use crate::channel::ChannelError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("need at least 2 replications, got {0}")]
    TooFewReplications(usize),
    #[error("not enough data for the test: {0}")]
    InsufficientData(String),
}

/// Runs one replication with the engine named in the config.
pub fn simulate(config: &SimConfig) -> Result<SimStats, SimError> {
    run_replication(config, 0)
}

pub(crate) fn run_replication(config: &SimConfig, replication: u64) -> Result<SimStats, SimError> {
    match config.engine {
        Engine::Continuous => continuous::run(config, replication),
        Engine::Discrete => discrete::run(config, replication),
    }
}
