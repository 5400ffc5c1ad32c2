use serde::Deserialize;

use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GovernanceParams {
    pub delta_h: f64,
    pub delta_ai: f64,
    pub epsilon_influence: f64,
    pub lambda_env: f64,
    pub cost_capture: f64,
    pub cost_maladapt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GovernanceThresholds {
    /// `Δ_H / (Δ_H + Δ_AI)`
    pub capture_eps_crit: f64,
    /// `ε Δ_AI / Δ_H`
    pub coalition_min_weight: f64,
    /// `ε Δ_AI / (Δ_H + ε Δ_AI)`
    pub symbiosis_min_weight: f64,
    /// `ln(C_capture / C_maladapt) / λ`
    pub optimal_bits: f64,
}

pub fn governance_thresholds(p: &GovernanceParams) -> Result<GovernanceThresholds> {
    if !(p.delta_h > 0.0 && p.delta_ai > 0.0) {
        return validation("preference intensities must be positive");
    }
    if !(0.0..=1.0).contains(&p.epsilon_influence) {
        return validation(format!("influence must lie in [0, 1], got {}", p.epsilon_influence));
    }
    if !(p.lambda_env > 0.0) {
        return validation(format!("environment rate must be > 0, got {}", p.lambda_env));
    }
    if !(p.cost_capture > 0.0 && p.cost_maladapt > 0.0) {
        return validation("capture and maladaptation costs must be positive");
    }
    let e = p.epsilon_influence * p.delta_ai;
    Ok(GovernanceThresholds {
        capture_eps_crit: p.delta_h / (p.delta_h + p.delta_ai),
        coalition_min_weight: e / p.delta_h,
        symbiosis_min_weight: e / (p.delta_h + e),
        optimal_bits: (p.cost_capture / p.cost_maladapt).ln() / p.lambda_env,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmpireReport {
    pub g_nash: f64,
    pub g_per_lineage: f64,
    pub u_nash: f64,
    pub g_social: f64,
    pub u_social: f64,
    pub efficiency_loss: f64,
    /// Interior Nash contribution exceeded the endowment; everyone gives `w`.
    pub nash_at_cap: bool,
    /// The social optimum was clipped to the aggregate endowment.
    pub social_clipped: bool,
}

/// Symmetric public-good game with per-lineage utility `(w − gᵢ) + β√G`.
pub fn umpire_game(n: usize, beta: f64, endowment: f64) -> Result<UmpireReport> {
    if n < 2 {
        return validation(format!("need at least two lineages, got {n}"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return validation(format!("beta must be >= 0, got {beta}"));
    }
    if !(endowment > 0.0 && endowment.is_finite()) {
        return validation(format!("endowment must be > 0, got {endowment}"));
    }
    let nf = n as f64;
    let cap = nf * endowment;
    let utility = |g_total: f64| (endowment - g_total / nf) + beta * g_total.sqrt();

    // each lineage: −1 + β/(2√G) = 0
    let interior = beta * beta / 4.0;
    let nash_at_cap = interior / nf > endowment;
    let g_nash = interior.min(cap);
    // planner: −1 + nβ/(2√G) = 0
    let social = (nf * beta / 2.0).powi(2);
    let social_clipped = social > cap;
    let g_social = social.min(cap);
    let u_nash = utility(g_nash);
    let u_social = utility(g_social);
    Ok(UmpireReport {
        g_nash,
        g_per_lineage: g_nash / nf,
        u_nash,
        g_social,
        u_social,
        efficiency_loss: (u_social - u_nash) / u_social,
        nash_at_cap,
        social_clipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliteTipping {
    pub weighted: f64,
    pub unweighted: f64,
    /// `Σ (wᵢ − 1/n) Tᵢ`, i.e. `weighted − unweighted`.
    pub covariance: f64,
    pub covariance_positive: bool,
}

pub fn elite_tipping(weights: &[f64], indices: &[f64]) -> Result<EliteTipping> {
    if weights.len() != indices.len() || weights.is_empty() {
        return validation("weights and indices must have the same nonzero length");
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return validation("weights must lie on the simplex");
    }
    let n = weights.len() as f64;
    let weighted: f64 = weights.iter().zip(indices).map(|(w, t)| w * t).sum();
    let unweighted = indices.iter().sum::<f64>() / n;
    let covariance: f64 = weights.iter().zip(indices).map(|(w, t)| (w - 1.0 / n) * t).sum();
    Ok(EliteTipping { weighted, unweighted, covariance, covariance_positive: covariance > 1e-12 })
}
