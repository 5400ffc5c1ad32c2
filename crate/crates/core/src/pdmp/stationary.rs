use super::sim::{pdmp_simulate, EventKind, PdmpConfig};
use crate::error::{config, Result};
use crate::stats::batch_means_stderr;

const BATCHES: usize = 20;
/// Exits must keep pace with entries to this fraction for the
/// entry-exit balance flag.
const EEB_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryActiveSet {
    /// Time-weighted mean of `|S|` over `[burn_in, horizon]`.
    pub mean: f64,
    pub stderr: f64,
    pub entry_rate: f64,
    /// Induced extinction rate (exits per unit time after burn-in).
    pub exit_rate: f64,
    pub eeb_satisfied: bool,
    pub pool_exhausted: bool,
}

/// Long-run active-set size. Batch means are taken over sampled `|S|`.
pub fn stationary_active_set(cfg: &PdmpConfig, horizon: f64, burn_in: f64) -> Result<StationaryActiveSet> {
    if !(horizon > burn_in && burn_in >= 0.0) {
        return config(format!("horizon {horizon} must exceed burn-in {burn_in}"));
    }
    let mut run = cfg.clone();
    run.horizon = horizon;
    let report = pdmp_simulate(&run)?;

    // |S| is piecewise constant between events
    let mut size = cfg.initial_shares.len() as f64;
    let mut last: f64 = 0.0;
    let mut area = 0.0;
    let (mut entries, mut exits) = (0usize, 0usize);
    for e in &report.events {
        let from = last.max(burn_in);
        if e.time > from {
            area += size * (e.time - from);
        }
        last = e.time;
        match e.kind {
            EventKind::Innovation(_) => size += 1.0,
            EventKind::Extinction(_) => size -= 1.0,
        }
        if e.time >= burn_in {
            match e.kind {
                EventKind::Innovation(_) => entries += 1,
                EventKind::Extinction(_) => exits += 1,
            }
        }
    }
    area += size * (horizon - last.max(burn_in));
    let window = horizon - burn_in;
    let sizes: Vec<f64> = report
        .samples
        .iter()
        .filter(|s| s.time >= burn_in)
        .map(|s| s.active.len() as f64)
        .collect();
    let entry_rate = entries as f64 / window;
    let exit_rate = exits as f64 / window;
    Ok(StationaryActiveSet {
        mean: area / window,
        stderr: batch_means_stderr(&sizes, BATCHES),
        entry_rate,
        exit_rate,
        eeb_satisfied: exits as f64 >= EEB_RATIO * entries as f64,
        pool_exhausted: report.pool_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdmp::LinearFitness;

    #[test]
    fn no_innovation_keeps_initial_size() {
        let cfg = PdmpConfig {
            innovation_rate: 0.0,
            entry_mass: 0.05,
            extinction_threshold: 0.01,
            foster_c: 0.2,
            strategies: vec![LinearFitness::new(1.0, vec![-1.0, 0.0]), LinearFitness::new(1.0, vec![0.0, -1.0])],
            initial_shares: vec![0.4, 0.6],
            horizon: 1.0,
            seed: 3,
            step: 0.05,
            sample_interval: 0.5,
        };
        let s = stationary_active_set(&cfg, 100.0, 10.0).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.stderr, 0.0);
        assert!(stationary_active_set(&cfg, 10.0, 10.0).is_err());
    }
}
