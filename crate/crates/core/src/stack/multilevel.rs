use super::GainAnalysis;
use crate::dynamics::{check_series_monotone, LyapunovReport};
use crate::error::{config, validation, Error, Result};
use crate::ode::{step_schedule, Rk4};
use crate::simplex::{renormalize_in_place, PopulationState};

/// Synchronized per-level replicator trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrajectories {
    pub times: Vec<f64>,
    /// `states[t][ℓ]`.
    pub states: Vec<Vec<Vec<f64>>>,
    /// `mean_fitness[ℓ][t]`.
    pub mean_fitness: Vec<Vec<f64>>,
}

/// Integrates one replicator per level; `fitness(levels)` returns every
/// level's fitness vector given every level's shares.
pub fn integrate_levels<F>(initial: &[PopulationState], fitness: F, horizon: f64, step: f64) -> Result<LevelTrajectories>
where
    F: Fn(&[&[f64]]) -> Vec<Vec<f64>>,
{
    if initial.is_empty() {
        return config("no levels given");
    }
    if !(step > 0.0) || !(horizon >= 0.0) {
        return config("step must be positive and horizon nonnegative");
    }
    let dims: Vec<usize> = initial.iter().map(|s| s.dim()).collect();
    let offsets: Vec<usize> = dims.iter().scan(0, |acc, d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();
    let total: usize = dims.iter().sum();
    let split = |x: &[f64]| -> Vec<Vec<f64>> {
        dims.iter().zip(&offsets).map(|(&d, &o)| x[o..o + d].to_vec()).collect()
    };
    let eval = |x: &[f64]| -> Vec<Vec<f64>> {
        let parts = split(x);
        let refs: Vec<&[f64]> = parts.iter().map(|p| p.as_slice()).collect();
        fitness(&refs)
    };
    let record = |x: &[f64], traj: &mut LevelTrajectories| -> Result<()> {
        let f = eval(x);
        let parts = split(x);
        for (l, (p, fl)) in parts.iter().zip(&f).enumerate() {
            if fl.len() != p.len() {
                return config(format!("level {l} fitness has length {}, expected {}", fl.len(), p.len()));
            }
            traj.mean_fitness[l].push(p.iter().zip(fl).map(|(a, b)| a * b).sum());
        }
        traj.states.push(parts);
        Ok(())
    };

    let mut x: Vec<f64> = initial.iter().flat_map(|s| s.shares().iter().copied()).collect();
    let mut traj = LevelTrajectories {
        times: vec![0.0],
        states: Vec::new(),
        mean_fitness: vec![Vec::new(); dims.len()],
    };
    record(&x, &mut traj)?;
    let mut rk = Rk4::new(total);
    let mut field = |_t: f64, x: &[f64], dx: &mut [f64]| {
        let f = eval(x);
        for (l, (&d, &o)) in dims.iter().zip(&offsets).enumerate() {
            let m: f64 = (0..d).map(|j| x[o + j] * f[l][j]).sum();
            for j in 0..d {
                dx[o + j] = x[o + j] * (f[l][j] - m);
            }
        }
    };
    for (t, h) in step_schedule(horizon, step) {
        rk.step(&mut field, t, &mut x, h);
        for (&d, &o) in dims.iter().zip(&offsets) {
            renormalize_in_place(&mut x[o..o + d], initial[0].threshold())
                .map_err(|e| Error::NumericalBlowup { time: t + h, detail: e.to_string() })?;
        }
        traj.times.push(t + h);
        record(&x, &mut traj)?;
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointLyapunovReport {
    /// `Ψ(t) = Σ α_ℓ f̄⁽ℓ⁾(t)`.
    pub psi: Vec<f64>,
    pub report: LyapunovReport,
}

/// Monotonicity of the weighted joint mean fitness along synchronized
/// level trajectories.
pub fn joint_lyapunov(analysis: &GainAnalysis, trajectories: &LevelTrajectories) -> Result<JointLyapunovReport> {
    let Some(w) = &analysis.weights else {
        return Err(Error::WeightsNonexistent { rho: analysis.spectral_radius });
    };
    if trajectories.mean_fitness.len() != w.alpha.len() {
        return validation(format!(
            "{} level trajectories for a {}-level stack",
            trajectories.mean_fitness.len(),
            w.alpha.len()
        ));
    }
    let t = trajectories.times.len();
    if trajectories.mean_fitness.iter().any(|m| m.len() != t) {
        return validation("level trajectories have mismatched lengths");
    }
    let psi: Vec<f64> = (0..t)
        .map(|k| w.alpha.iter().zip(&trajectories.mean_fitness).map(|(a, m)| a * m[k]).sum())
        .collect();
    let report = check_series_monotone(&trajectories.times, &psi, None)?;
    Ok(JointLyapunovReport { psi, report })
}
