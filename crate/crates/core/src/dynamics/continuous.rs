use crate::dynamics::integrate_replicator_sampled;
use crate::error::{config, Result};
use crate::fitness::FitnessModel;
use crate::simplex::PopulationState;

/// Shares below this are ignored when grouping clusters.
const CLUSTER_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousReport {
    /// Trait values `s_i = i / (n − 1)`.
    pub grid: Vec<f64>,
    pub final_state: PopulationState,
    /// `(center, mass)` of each contiguous run of grid points holding at
    /// least `1e-4` of the population.
    pub clusters: Vec<(f64, f64)>,
    /// Mass on `s ∈ [0.3, 0.6]`.
    pub middle_mass: f64,
    pub mean_trait: f64,
}

/// Replicator dynamics on an `n`-point grid of the trait interval `[0, 1]`
/// with fitness `F(s, μ) = s^α − s^β · mean(μ)`, started from the uniform
/// distribution.
pub fn discretized_continuous_run(
    return_exponent: f64,
    cost_exponent: f64,
    grid_size: usize,
    horizon: f64,
    step: f64,
) -> Result<ContinuousReport> {
    if grid_size < 8 {
        return config(format!("grid size must be at least 8, got {grid_size}"));
    }
    if !(return_exponent > 0.0) || !(return_exponent < cost_exponent) {
        return config(format!(
            "need 0 < return exponent < cost exponent, got {return_exponent} and {cost_exponent}"
        ));
    }
    let grid: Vec<f64> = (0..grid_size).map(|i| i as f64 / (grid_size - 1) as f64).collect();
    let ret: Vec<f64> = grid.iter().map(|s| s.powf(return_exponent)).collect();
    let cost: Vec<f64> = grid.iter().map(|s| s.powf(cost_exponent)).collect();
    let g = grid.clone();
    let model = FitnessModel::general(grid_size, move |x| {
        let m: f64 = x.iter().zip(&g).map(|(xi, si)| xi * si).sum();
        ret.iter().zip(&cost).map(|(r, c)| r - c * m).collect()
    });
    let start = PopulationState::uniform(grid_size)?;
    let steps = (horizon / step).ceil().max(1.0) as usize;
    let traj = integrate_replicator_sampled(&start, &model, horizon, step, steps)?;
    let final_state = traj.final_state().clone();
    let x = final_state.shares();

    let mut clusters = Vec::new();
    let mut i = 0;
    while i < grid_size {
        if x[i] < CLUSTER_FLOOR {
            i += 1;
            continue;
        }
        let (mut mass, mut moment) = (0.0, 0.0);
        while i < grid_size && x[i] >= CLUSTER_FLOOR {
            mass += x[i];
            moment += x[i] * grid[i];
            i += 1;
        }
        clusters.push((moment / mass, mass));
    }
    let middle_mass = grid
        .iter()
        .zip(x)
        .filter(|(s, _)| (0.3..=0.6).contains(*s))
        .map(|(_, xi)| xi)
        .sum();
    let mean_trait = grid.iter().zip(x).map(|(s, xi)| s * xi).sum();
    Ok(ContinuousReport { grid, final_state, clusters, middle_mass, mean_trait })
}

/// Wasserstein-1 distance between two discrete measures on the line,
/// `∫ |F_a − F_b|`.
pub fn wasserstein1(points_a: &[f64], mass_a: &[f64], points_b: &[f64], mass_b: &[f64]) -> f64 {
    let mut events: Vec<(f64, f64)> = points_a
        .iter()
        .zip(mass_a)
        .map(|(&p, &m)| (p, m))
        .chain(points_b.iter().zip(mass_b).map(|(&p, &m)| (p, -m)))
        .collect();
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for w in events.windows(2) {
        cdf_gap += w[0].1;
        total += cdf_gap.abs() * (w[1].0 - w[0].0);
    }
    total
}
