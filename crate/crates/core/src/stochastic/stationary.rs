use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{config, Result};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryConfig {
    pub seed: u64,
    pub step: f64,
    pub horizon: f64,
    /// Time discarded before occupancy is counted.
    pub burn_in: f64,
}

/// Long-run time fractions on either side of the saddle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    pub sigma: f64,
    pub below: f64,
    pub above: f64,
    /// Saddle crossings observed after burn-in.
    pub transitions: u64,
}

/// Occupancy of the two basins of a 1-D drift with a single saddle, one
/// long Euler–Maruyama path per σ starting in the lower well.
pub fn stationary_concentration<D>(
    drift: D,
    saddle: f64,
    start: f64,
    sigmas: &[f64],
    cfg: &StationaryConfig,
) -> Result<Vec<Occupancy>>
where
    D: Fn(f64) -> f64,
{
    if !(cfg.step > 0.0) || !(cfg.horizon > cfg.burn_in) || !(cfg.burn_in >= 0.0) {
        return config("need step > 0 and horizon > burn_in >= 0");
    }
    if sigmas.iter().any(|s| !(*s > 0.0)) {
        return config("noise intensities must be positive");
    }
    let steps = (cfg.horizon / cfg.step).round() as u64;
    let burn = (cfg.burn_in / cfg.step).round() as u64;
    let mut out = Vec::with_capacity(sigmas.len());
    for (i, &sigma) in sigmas.iter().enumerate() {
        let mut rng = stream(cfg.seed, Purpose::Stationary, i as u64);
        let amp = (sigma * cfg.step).sqrt();
        let mut x = start;
        let mut below = 0u64;
        let mut transitions = 0u64;
        let mut side = x < saddle;
        for k in 0..steps {
            let z: f64 = rng.sample(StandardNormal);
            x += drift(x) * cfg.step + amp * z;
            let now = x < saddle;
            if k >= burn {
                below += now as u64;
                transitions += (now != side) as u64;
            }
            side = now;
        }
        let counted = (steps - burn.min(steps)).max(1) as f64;
        let b = below as f64 / counted;
        out.push(Occupancy { sigma, below: b, above: 1.0 - b, transitions });
    }
    Ok(out)
}
