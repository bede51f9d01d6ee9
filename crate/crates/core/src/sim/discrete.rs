use super::config::{Engine, SimConfig};
use super::rng::StreamKey;
use super::stats::{Histogram, SimMetadata, SimStats, WorkLedger};
use super::SimError;

/// Inverse-CDF draw from Poisson(mean).
pub fn poisson_from_uniform(u: f64, mean: f64) -> u64 {
    let mut p = (-mean).exp();
    let mut cdf = p;
    let mut k = 0u64;
    while u >= cdf {
        k += 1;
        p *= mean / k as f64;
        let next = cdf + p;
        if next == cdf && k as f64 > mean {
            break;
        }
        cdf = next;
    }
    k
}

/// Evolves the embedded D/G/1 chain with Poisson(θ) service times.
///
/// Packet n arrives at boundary n and leaves at the start of block
/// t_n = max(t_{n−1}, n) + T_n, leaving t_n − n packets behind. Delays are whole blocks.
pub fn run_discrete(config: &SimConfig) -> Result<SimStats, SimError> {
    if config.engine != Engine::Discrete {
        return Err(SimError::Config("run_discrete needs engine = discrete".into()));
    }
    run(config, 0)
}

pub(super) fn run(config: &SimConfig, replication: u64) -> Result<SimStats, SimError> {
    config.validate()?;
    let theta = config.theta();
    if theta > 700.0 {
        return Err(SimError::Config(format!("θ = {theta} is too large for the discrete engine")));
    }
    let key = StreamKey::new(config.seed.wrapping_add(replication), replication);
    let horizon = config.num_blocks;
    let warmup = config.warmup_blocks;
    let expected = (horizon - warmup) as usize;

    let mut dep_hist = Histogram::new();
    let mut bnd_hist = Histogram::new();
    let mut svc_hist = Histogram::new();
    let mut delays = Vec::with_capacity(expected);
    let mut services = Vec::with_capacity(expected);

    // Blocks [prev, t_n) see packets 0..n−1 gone and 0..=m arrived.
    let mut prev = 0u64;
    let mut n = 0u64;
    while n < horizon && prev < horizon {
        let t_n = prev.max(n) + poisson_from_uniform(key.uniform(n, 0), theta);
        for m in prev.max(warmup)..t_n.min(horizon) {
            bnd_hist.record(m + 1 - n);
        }
        if t_n < horizon && n >= warmup {
            let blocks = t_n - prev.max(n);
            dep_hist.record(t_n - n);
            svc_hist.record(blocks);
            delays.push((t_n - n) as f64);
            services.push(blocks.min(u32::MAX as u64) as u32);
        }
        prev = t_n;
        n += 1;
    }
    for m in prev.max(warmup)..horizon {
        bnd_hist.record(m + 1 - n);
    }

    let mut stats = SimStats {
        metadata: SimMetadata {
            config: *config,
            replication,
            theta,
            packet_size: config.packet_size(),
            nu: config.nu(),
            unstable: theta >= 1.0,
            overflow_mass: 0.0,
            overflow_flagged: false,
        },
        queue_length_histogram_departure: dep_hist,
        queue_length_histogram_boundary: bnd_hist,
        service_time_histogram: svc_hist,
        delay_samples: delays,
        vestige_samples: Vec::new(),
        service_samples: services,
        work: WorkLedger::default(),
        wallclock_delay_mean: None,
    };
    stats.finish_metadata();
    Ok(stats)
}
