use crate::dynamics::price::{dot, variance_of};
use crate::dynamics::Trajectory;
use crate::error::{validation, Result};
use crate::fitness::FitnessModel;

/// Margins below `-MARGIN_TOL` count as violations.
pub const MARGIN_TOL: f64 = 1e-9;

/// Outcome of a sampled Lyapunov-monotonicity check.
///
/// Each margin compares the finite-difference slope of the candidate
/// function between consecutive samples with the required lower bound
/// (trapezoidal average of the bound at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovReport {
    pub monotone: bool,
    /// All margins strictly above tolerance.
    pub strict: bool,
    pub min_margin: f64,
    pub margins: Vec<f64>,
    pub violating_times: Vec<f64>,
    /// Largest |ΔV/Δt| seen; near zero for conserved quantities.
    pub max_abs_derivative: f64,
}

/// Checks `d f̄/dt ≥ (1 − γ) Var` along a trajectory.
pub fn check_lyapunov_monotone(
    trajectory: &Trajectory,
    model: &FitnessModel,
    gamma: f64,
) -> Result<LyapunovReport> {
    if trajectory.is_empty() {
        return validation("trajectory is empty");
    }
    if !(0.0..1.0).contains(&gamma) && gamma != 1.0 {
        return validation(format!("gamma {gamma} outside [0, 1]"));
    }
    let mut values = Vec::with_capacity(trajectory.len());
    let mut bounds = Vec::with_capacity(trajectory.len());
    for s in &trajectory.states {
        let f = model.fitness(s)?;
        values.push(dot(s.shares(), &f));
        bounds.push((1.0 - gamma) * variance_of(s.shares(), &f));
    }
    check_series_monotone(&trajectory.times, &values, Some(&bounds))
}

/// Checks that `values` is nondecreasing along `times` with slope at least
/// `lower_bound` (zero when absent).
pub fn check_series_monotone(
    times: &[f64],
    values: &[f64],
    lower_bound: Option<&[f64]>,
) -> Result<LyapunovReport> {
    if times.is_empty() {
        return validation("series is empty");
    }
    if times.len() != values.len() || lower_bound.is_some_and(|b| b.len() != times.len()) {
        return validation("series lengths differ");
    }
    let mut margins = Vec::with_capacity(times.len().saturating_sub(1));
    let mut violating = Vec::new();
    let mut max_abs = 0.0f64;
    for i in 0..times.len().saturating_sub(1) {
        let dt = times[i + 1] - times[i];
        if dt <= 0.0 {
            return validation("times must be strictly increasing");
        }
        let slope = (values[i + 1] - values[i]) / dt;
        max_abs = max_abs.max(slope.abs());
        let bound = lower_bound.map_or(0.0, |b| 0.5 * (b[i] + b[i + 1]));
        let margin = slope - bound;
        if margin < -MARGIN_TOL {
            violating.push(times[i]);
        }
        margins.push(margin);
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let min_margin = if margins.is_empty() { 0.0 } else { min_margin };
    Ok(LyapunovReport {
        monotone: violating.is_empty(),
        strict: !margins.is_empty() && min_margin > MARGIN_TOL,
        min_margin,
        margins,
        violating_times: violating,
        max_abs_derivative: max_abs,
    })
}
