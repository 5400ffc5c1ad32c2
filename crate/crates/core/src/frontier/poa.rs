use nalgebra::{DMatrix, DVector};

use crate::error::{config, Result};
use crate::fitness::{FitnessModel, Matrix};
use crate::simplex::for_each_grid_point;

const SUPPORT_EPS: f64 = 1e-12;
const NASH_TOL: f64 = 1e-9;
const STABILITY_TOL: f64 = 1e-9;

/// A rest point of the replicator found by support enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct RestPoint {
    pub shares: Vec<f64>,
    pub mean_fitness: f64,
    /// No absent type earns more than the mean.
    pub nash: bool,
    /// Largest real part of the replicator Jacobian on the simplex tangent
    /// space.
    pub max_growth_rate: f64,
}

impl RestPoint {
    pub fn stable(&self) -> bool {
        self.nash && self.max_growth_rate <= STABILITY_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoaReport {
    /// Best achievable mean fitness on the simplex.
    pub optimum: f64,
    /// Mean fitness of the worst stable equilibrium.
    pub worst_equilibrium: f64,
    /// `optimum / worst_equilibrium`; `None` when the denominator is ≤ 0.
    pub poa: Option<f64>,
    /// Largest `|E| / Var` seen on the grid.
    pub gamma: f64,
    /// `1 / (1 − γ)`; `None` when γ ≥ 1 (the bound is vacuous).
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub equilibria: Vec<RestPoint>,
}

/// Enumerate all supports `S`, solving `Π_SS x_S = v·𝟙, Σ x_S = 1` for
/// a point with strictly positive support shares.
fn support_solutions(m: &Matrix) -> Vec<Vec<f64>> {
    let n = m.nrows();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let k = s.len();
        let mut a = DMatrix::zeros(k + 1, k + 1);
        let mut rhs = DVector::zeros(k + 1);
        for (r, &i) in s.iter().enumerate() {
            for (c, &j) in s.iter().enumerate() {
                a[(r, c)] = m[(i, j)];
            }
            a[(r, k)] = -1.0;
            a[(k, r)] = 1.0;
        }
        rhs[k] = 1.0;
        let Some(sol) = a.lu().solve(&rhs) else { continue };
        if (0..k).all(|r| sol[r] > SUPPORT_EPS) {
            let mut x = vec![0.0; n];
            for (r, &i) in s.iter().enumerate() {
                x[i] = sol[r];
            }
            out.push(x);
        }
    }
    out
}

/// Largest real part of the replicator Jacobian at `x`, restricted to the
/// tangent space of the simplex.
pub fn replicator_stability(payoff: &Matrix, x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return f64::NEG_INFINITY;
    }
    let xv = DVector::from_column_slice(x);
    let f = payoff * &xv;
    let mean = xv.dot(&f);
    // ∂f̄/∂x_k = f_k + Σ_j x_j Π_jk
    let grad_mean = &f + payoff.transpose() * &xv;
    let jac = DMatrix::from_fn(n, n, |i, k| {
        let d = if i == k { f[i] - mean } else { 0.0 };
        d + x[i] * (payoff[(i, k)] - grad_mean[k])
    });
    // orthonormal tangent basis via QR of the centered differences
    let mut t = DMatrix::zeros(n, n - 1);
    for c in 0..n - 1 {
        t[(c, c)] = 1.0;
        t[(n - 1, c)] = -1.0;
    }
    let q = t.qr().q();
    let reduced = q.transpose() * jac * &q;
    reduced.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Worst stable equilibrium versus the social optimum, compared with the
/// `1/(1−γ)` bound from the measured externality ratio.
pub fn price_of_anarchy(model: &FitnessModel, grid_resolution: usize) -> Result<PoaReport> {
    let payoff = model.require_linear()?;
    let n = payoff.nrows();
    if n > 4 {
        return config(format!("price of anarchy is brute force and limited to 4 types, got {n}"));
    }
    if grid_resolution < 2 {
        return config(format!("grid resolution must be at least 2, got {grid_resolution}"));
    }
    let fbar = |x: &[f64]| {
        let xv = DVector::from_column_slice(x);
        xv.dot(&(payoff * &xv))
    };

    let equilibria: Vec<RestPoint> = support_solutions(payoff)
        .into_iter()
        .map(|x| {
            let xv = DVector::from_column_slice(&x);
            let f = payoff * &xv;
            let mean = xv.dot(&f);
            let nash = (0..n).all(|j| x[j] > 0.0 || f[j] <= mean + NASH_TOL);
            let max_growth_rate = replicator_stability(payoff, &x);
            RestPoint { shares: x, mean_fitness: mean, nash, max_growth_rate }
        })
        .collect();
    let worst_equilibrium = equilibria
        .iter()
        .filter(|e| e.stable())
        .map(|e| e.mean_fitness)
        .fold(f64::INFINITY, f64::min);

    // the maximizer of xᵀΠx lies on a face where (Π+Πᵀ) x is constant
    let sym = (payoff + payoff.transpose()) * 0.5;
    let mut optimum = support_solutions(&sym).iter().map(|x| fbar(x)).fold(f64::NEG_INFINITY, f64::max);
    let mut gamma: f64 = 0.0;
    let model_ref = model;
    for_each_grid_point(n, grid_resolution, |x| {
        optimum = optimum.max(fbar(x));
        let f = model_ref.fitness_raw(x);
        let t = crate::dynamics::price_terms_raw(model_ref, x, &f);
        if t.variance > 1e-12 {
            gamma = gamma.max(t.externality.abs() / t.variance);
        }
    });

    let poa = (worst_equilibrium.is_finite() && worst_equilibrium > 0.0).then(|| optimum / worst_equilibrium);
    let bound = (gamma < 1.0 - 1e-9).then(|| 1.0 / (1.0 - gamma));
    let within_bound = match (poa, bound) {
        (Some(p), Some(b)) => Some(p <= b + 1e-9),
        _ => None,
    };
    Ok(PoaReport { optimum, worst_equilibrium, poa, gamma, bound, within_bound, equilibria })
}
