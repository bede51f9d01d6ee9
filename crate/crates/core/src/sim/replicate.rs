use rayon::prelude::*;
use serde::Serialize;

use super::config::SimConfig;
use super::run_replication;
use super::stats::{Histogram, MetricEstimate, SimSummary};
use super::SimError;

/// Aggregate over independent replications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateReport {
    pub config: SimConfig,
    pub replications: usize,
    pub per_replication: Vec<SimSummary>,
    pub mean_delay: MetricEstimate,
    pub mean_vestige: Option<MetricEstimate>,
    pub mean_service: MetricEstimate,
    pub mean_queue_departure: MetricEstimate,
    pub mean_queue_boundary: MetricEstimate,
    pub empty_fraction_departure: MetricEstimate,
    pub queue_length_histogram_departure: Histogram,
    pub queue_length_histogram_boundary: Histogram,
    pub service_time_histogram: Histogram,
}

/// Runs `config.replications` independent replications (seed, seed+1, …) in parallel.
///
/// Each replication owns its random stream and the results are folded in replication
/// order, so the report does not depend on thread scheduling.
pub fn replicate(config: &SimConfig) -> Result<ReplicateReport, SimError> {
    if config.replications < 2 {
        return Err(SimError::TooFewReplications(config.replications));
    }
    config.validate()?;
    let runs: Vec<_> = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(config, r).map(|s| (s.summary(), s)))
        .collect::<Result<_, _>>()?;

    let mut dep = Histogram::new();
    let mut bnd = Histogram::new();
    let mut svc = Histogram::new();
    for (_, s) in &runs {
        dep.merge(&s.queue_length_histogram_departure);
        bnd.merge(&s.queue_length_histogram_boundary);
        svc.merge(&s.service_time_histogram);
    }
    let summaries: Vec<SimSummary> = runs.into_iter().map(|(m, _)| m).collect();
    let across = |f: &dyn Fn(&SimSummary) -> f64| {
        MetricEstimate::from_iid(&summaries.iter().map(f).collect::<Vec<_>>())
    };
    let mean_vestige = summaries
        .iter()
        .all(|s| s.mean_vestige.is_some())
        .then(|| across(&|s| s.mean_vestige.map_or(f64::NAN, |v| v.mean)));

    Ok(ReplicateReport {
        config: *config,
        replications: config.replications,
        mean_delay: across(&|s| s.mean_delay.mean),
        mean_vestige,
        mean_service: across(&|s| s.mean_service),
        mean_queue_departure: across(&|s| s.mean_queue_departure),
        mean_queue_boundary: across(&|s| s.mean_queue_boundary),
        empty_fraction_departure: across(&|s| s.empty_fraction_departure),
        per_replication: summaries,
        queue_length_histogram_departure: dep,
        queue_length_histogram_boundary: bnd,
        service_time_histogram: svc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Engine;

    #[test]
    fn needs_two_replications() {
        let cfg = SimConfig::for_load(Engine::Discrete, 0.5, 1000, 1);
        assert_eq!(replicate(&cfg), Err(SimError::TooFewReplications(1)));
    }

    #[test]
    fn first_replication_matches_single_run() {
        let mut cfg = SimConfig::for_load(Engine::Continuous, 0.5, 5_000, 21);
        cfg.replications = 3;
        let rep = replicate(&cfg).unwrap();
        let single = crate::sim::simulate(&cfg).unwrap().summary();
        assert_eq!(rep.per_replication[0], single);
        assert_ne!(rep.per_replication[1], single);
    }
}
