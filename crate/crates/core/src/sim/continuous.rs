use std::collections::VecDeque;

use super::config::{Engine, SimConfig};
use super::rng::StreamKey;
use super::stats::{Histogram, SimMetadata, SimStats, WorkLedger};
use super::SimError;
use crate::channel::block_service_from_uniform;

struct Packet {
    arrival: u64,
    remaining: f64,
    first_block: Option<u64>,
}

/// Simulates the physical buffer: nats in, per-block channel capacity out.
///
/// The packet arriving at boundary m joins before block m is served. A packet's
/// delay is the number of whole blocks between its arrival and the block it
/// finishes in, plus its vestige: the share of the capacity it was offered in
/// that final block that it actually needed.
pub fn run_continuous(config: &SimConfig) -> Result<SimStats, SimError> {
    if config.engine != Engine::Continuous {
        return Err(SimError::Config("run_continuous needs engine = continuous".into()));
    }
    run(config, 0)
}

pub(super) fn run(config: &SimConfig, replication: u64) -> Result<SimStats, SimError> {
    config.validate()?;
    let channel = config.channel();
    let packet_size = config.packet_size();
    let key = StreamKey::new(config.seed.wrapping_add(replication), replication);
    let warmup = config.warmup_blocks;
    let expected = (config.num_blocks - warmup) as usize;

    let mut queue: VecDeque<Packet> = VecDeque::new();
    let mut departed: u64 = 0;
    let mut dep_hist = Histogram::new();
    let mut bnd_hist = Histogram::new();
    let mut svc_hist = Histogram::new();
    let mut delays = Vec::with_capacity(expected);
    let mut vestiges = Vec::with_capacity(expected);
    let mut services = Vec::with_capacity(expected);
    let mut work = WorkLedger::default();
    let mut wallclock = 0.0;

    for m in 0..config.num_blocks {
        queue.push_back(Packet { arrival: m, remaining: packet_size, first_block: None });
        let offered = block_service_from_uniform(key.uniform(m, 0), &channel, config.capacity_mode)?;
        let mut avail = offered;
        while avail > 0.0 {
            let Some(head) = queue.front_mut() else { break };
            let first = *head.first_block.get_or_insert(m);
            if head.remaining < avail {
                let vestige = head.remaining / avail;
                avail -= head.remaining;
                let arrival = head.arrival;
                queue.pop_front();
                departed += 1;
                if arrival >= warmup {
                    let blocks = m - first;
                    let left_behind = (m + 1) - departed;
                    dep_hist.record(left_behind);
                    svc_hist.record(blocks);
                    delays.push((m - arrival) as f64 + vestige);
                    vestiges.push(vestige);
                    services.push(blocks.min(u32::MAX as u64) as u32);
                    wallclock += (m - arrival) as f64 + (offered - avail) / offered;
                }
            } else {
                head.remaining -= avail;
                avail = 0.0;
            }
        }
        if m >= warmup {
            bnd_hist.record((m + 1) - departed);
            work.offered += offered;
            work.served += offered - avail;
            if !queue.is_empty() {
                work.busy_blocks += 1;
                work.busy_offered += offered;
                work.busy_served += offered - avail;
            }
        }
    }

    let n = delays.len();
    let mut stats = SimStats {
        metadata: SimMetadata {
            config: *config,
            replication,
            theta: config.theta(),
            packet_size,
            nu: config.nu(),
            unstable: config.theta() >= 1.0,
            overflow_mass: 0.0,
            overflow_flagged: false,
        },
        queue_length_histogram_departure: dep_hist,
        queue_length_histogram_boundary: bnd_hist,
        service_time_histogram: svc_hist,
        delay_samples: delays,
        vestige_samples: vestiges,
        service_samples: services,
        work,
        wallclock_delay_mean: (n > 0).then(|| wallclock / n as f64),
    };
    stats.finish_metadata();
    Ok(stats)
}
