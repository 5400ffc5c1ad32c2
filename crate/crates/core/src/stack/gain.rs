use std::fmt::Write as _;

use nalgebra::DVector;

use super::spectral::spectral_radius;
use crate::error::{validation, Error, Result};
use crate::fitness::Matrix;

/// Radii within this distance of 1 are reported as critical.
pub const CRITICAL_BAND: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub gamma_self: f64,
    pub label: String,
}

/// Per-level self-externality bounds and the cross-level couplings
/// `β[ℓ][ℓ']` (effect of level `ℓ'` on level `ℓ`).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelStack {
    levels: Vec<Level>,
    cross_beta: Matrix,
}

impl LevelStack {
    pub fn new(levels: Vec<Level>, cross_beta: Matrix) -> Result<Self> {
        let n = levels.len();
        if n == 0 {
            return validation("stack has no levels");
        }
        if cross_beta.nrows() != n || cross_beta.ncols() != n {
            return validation(format!(
                "coupling matrix is {}x{}, expected {n}x{n}",
                cross_beta.nrows(),
                cross_beta.ncols()
            ));
        }
        for (l, lev) in levels.iter().enumerate() {
            if !(0.0..1.0).contains(&lev.gamma_self) {
                return validation(format!(
                    "H-γ violated at level {l} ({}): gamma = {}",
                    lev.label, lev.gamma_self
                ));
            }
        }
        for i in 0..n {
            if cross_beta[(i, i)] != 0.0 {
                return validation(format!("coupling diagonal must be zero at level {i}"));
            }
            for j in 0..n {
                let b = cross_beta[(i, j)];
                if !(b >= 0.0) || !b.is_finite() {
                    return validation(format!("coupling ({i}, {j}) must be finite and nonnegative, got {b}"));
                }
            }
        }
        Ok(LevelStack { levels, cross_beta })
    }

    /// Levels labelled `L0, L1, …`.
    pub fn from_parts(gammas: &[f64], cross_beta: Matrix) -> Result<Self> {
        let levels = gammas
            .iter()
            .enumerate()
            .map(|(i, &g)| Level { gamma_self: g, label: format!("L{i}") })
            .collect();
        Self::new(levels, cross_beta)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.gamma_self).collect()
    }

    pub fn cross_beta(&self) -> &Matrix {
        &self.cross_beta
    }
}

/// `Γ[ℓ][ℓ'] = β[ℓ][ℓ'] / (1 − γ_ℓ)`, zero diagonal.
pub fn build_gain_matrix(stack: &LevelStack) -> Matrix {
    let n = stack.levels.len();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            stack.cross_beta[(i, j)] / (1.0 - stack.levels[i].gamma_self)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Critical,
    Unstable,
}

impl Verdict {
    pub fn of(rho: f64) -> Self {
        if rho < 1.0 - CRITICAL_BAND {
            Verdict::Stable
        } else if rho <= 1.0 + CRITICAL_BAND {
            Verdict::Critical
        } else {
            Verdict::Unstable
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Critical => "critical",
            Verdict::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannWeights {
    /// Solution of `(I − Γᵀ) v = 𝟙`.
    pub v: Vec<f64>,
    /// `α_ℓ = v_ℓ / (1 − γ_ℓ)`.
    pub alpha: Vec<f64>,
    /// `‖(I − Γᵀ) v − 𝟙‖_∞`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainAnalysis {
    pub gammas: Vec<f64>,
    pub gain_matrix: Matrix,
    pub spectral_radius: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub weights: Option<NeumannWeights>,
}

impl GainAnalysis {
    pub fn from_gain(gammas: Vec<f64>, gain_matrix: Matrix) -> Result<Self> {
        let rho = spectral_radius(&gain_matrix)?;
        let verdict = Verdict::of(rho);
        let weights = match verdict {
            Verdict::Stable => Some(neumann_weights(&gammas, &gain_matrix)?),
            _ => None,
        };
        Ok(GainAnalysis { gammas, gain_matrix, spectral_radius: rho, slack: 1.0 - rho, verdict, weights })
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "levels = {}", self.gammas.len());
        let _ = writeln!(s, "spectral_radius = {}", self.spectral_radius);
        let _ = writeln!(s, "slack = {}", self.slack);
        let _ = writeln!(s, "verdict = {}", self.verdict.as_str());
        if let Some(w) = &self.weights {
            for (i, (v, a)) in w.v.iter().zip(&w.alpha).enumerate() {
                let _ = writeln!(s, "v_{i} = {v}");
                let _ = writeln!(s, "alpha_{i} = {a}");
            }
            let _ = writeln!(s, "weight_residual = {:e}", w.residual);
        }
        s
    }

    /// Gain matrix as CSV rows.
    pub fn matrix_csv(&self) -> String {
        let mut s = String::new();
        for r in self.gain_matrix.row_iter() {
            let row: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

pub fn analyze_stack(stack: &LevelStack) -> Result<GainAnalysis> {
    GainAnalysis::from_gain(stack.gammas(), build_gain_matrix(stack))
}

/// Small-gain weights from a direct solve of `(I − Γᵀ) v = 𝟙`.
pub fn neumann_weights(gammas: &[f64], gain: &Matrix) -> Result<NeumannWeights> {
    let n = gain.nrows();
    if gammas.len() != n {
        return validation(format!("{} gammas for a {n}-level gain matrix", gammas.len()));
    }
    let rho = spectral_radius(gain)?;
    if Verdict::of(rho) != Verdict::Stable {
        return Err(Error::WeightsNonexistent { rho });
    }
    let a = Matrix::identity(n, n) - gain.transpose();
    let ones = DVector::from_element(n, 1.0);
    let v = a
        .clone()
        .lu()
        .solve(&ones)
        .ok_or_else(|| Error::Numerical("I − Γᵀ is singular".into()))?;
    let residual = (&a * &v - &ones).amax();
    if residual > RESIDUAL_TOL {
        return Err(Error::Numerical(format!("weight residual {residual:e} exceeds {RESIDUAL_TOL:e}")));
    }
    if v.iter().any(|&x| x < 1.0 - 1e-12) {
        return Err(Error::Numerical("Neumann weights fell below 1".into()));
    }
    let alpha = v.iter().zip(gammas).map(|(x, g)| x / (1.0 - g)).collect();
    Ok(NeumannWeights { v: v.iter().copied().collect(), alpha, residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub extended: GainAnalysis,
    /// Smallest θ for which `‖b‖_{∞,v} ≤ θσ` and `⟨c, v⟩ ≤ θσ`.
    pub theta_effective: f64,
    /// θ < 1 and the realized slack is at least `(1 − θ)σ`.
    pub slack_bound_ok: bool,
}

fn bordered(gain: &Matrix, b: &[f64], c: &[f64]) -> Matrix {
    let n = gain.nrows();
    Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => gain[(i, j)],
        (true, false) => b[i],
        (false, true) => c[j],
        (false, false) => 0.0,
    })
}

/// Adds one level coupled to the stack by `b` (new → old, a column) and
/// `c` (old → new, a row): `[[Γ, b], [cᵀ, 0]]`.
pub fn extend_block(
    analysis: &GainAnalysis,
    b_new_to_old: &[f64],
    c_old_to_new: &[f64],
    gamma_new: f64,
) -> Result<ExtensionReport> {
    let n = analysis.gain_matrix.nrows();
    if b_new_to_old.len() != n || c_old_to_new.len() != n {
        return validation(format!("border vectors must have length {n}"));
    }
    if b_new_to_old.iter().chain(c_old_to_new).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return validation("border entries must be finite and nonnegative");
    }
    let Some(w) = &analysis.weights else {
        return Err(Error::WeightsNonexistent { rho: analysis.spectral_radius });
    };
    if !(0.0..1.0).contains(&gamma_new) {
        return validation(format!("H-γ violated at the new level: gamma = {gamma_new}"));
    }
    let sigma = analysis.slack;
    let b_norm = b_new_to_old.iter().zip(&w.v).map(|(b, v)| b / v).fold(0.0, f64::max);
    let c_dot: f64 = c_old_to_new.iter().zip(&w.v).map(|(c, v)| c * v).sum();
    let theta_effective = b_norm.max(c_dot) / sigma;

    let mut gammas = analysis.gammas.clone();
    gammas.push(gamma_new);
    let extended = GainAnalysis::from_gain(gammas, bordered(&analysis.gain_matrix, b_new_to_old, c_old_to_new))?;
    let slack_bound_ok = theta_effective < 1.0 && extended.slack >= (1.0 - theta_effective) * sigma - 1e-12;
    Ok(ExtensionReport { extended, theta_effective, slack_bound_ok })
}

/// Smallest factor `s` for which the border `(s·b, c)` breaks the
/// small-gain condition (`ρ ≥ 1`), or `None` if no factor up to `1e12`
/// does.
pub fn breaking_scale(analysis: &GainAnalysis, b: &[f64], c: &[f64]) -> Result<Option<f64>> {
    let rho_at = |s: f64| {
        let sb: Vec<f64> = b.iter().map(|x| s * x).collect();
        spectral_radius(&bordered(&analysis.gain_matrix, &sb, c))
    };
    if rho_at(0.0)? >= 1.0 {
        return Ok(Some(0.0));
    }
    let mut hi = 1.0;
    while rho_at(hi)? < 1.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if rho_at(mid)? < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}
