use serde::Deserialize;

use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowParams {
    pub gamma0: f64,
    pub gamma1: f64,
    pub nu: f64,
}

impl ShadowParams {
    pub fn new(gamma0: f64, gamma1: f64, nu: f64) -> Result<Self> {
        let p = ShadowParams { gamma0, gamma1, nu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.gamma0) {
            return validation(format!("gamma0 must lie in [0, 1), got {}", self.gamma0));
        }
        if !(self.gamma1 >= 0.0 && self.gamma1.is_finite()) {
            return validation(format!("gamma1 must be >= 0, got {}", self.gamma1));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return validation(format!("nu must be > 0, got {}", self.nu));
        }
        Ok(())
    }
}

/// `γ₀ + γ₁ / I^ν`.
pub fn lineage_shadow(quality: f64, p: &ShadowParams) -> Result<f64> {
    if !(quality > 0.0) {
        return validation(format!("institutional quality must be > 0, got {quality}"));
    }
    Ok(p.gamma0 + p.gamma1 / quality.powf(p.nu))
}

/// Smallest quality keeping the shadow below one: `(γ₁/(1−γ₀))^{1/ν}`.
pub fn institutional_floor(p: &ShadowParams) -> f64 {
    (p.gamma1 / (1.0 - p.gamma0)).powf(1.0 / p.nu)
}

/// Grim-trigger discount threshold `(T−R)/(T−P)`.
pub fn grim_trigger_threshold(t: f64, r: f64, p: f64) -> Result<f64> {
    if !(t >= r && r > p) {
        return validation(format!("need T >= R > P, got T={t}, R={r}, P={p}"));
    }
    Ok((t - r) / (t - p))
}

/// `(cn − b) / (b(n−1))`; tends to `c/b` as `n` grows.
pub fn n_player_threshold(cost: f64, benefit: f64, n: usize) -> Result<f64> {
    if !(benefit > 0.0) || n < 2 {
        return validation(format!("need b > 0 and n >= 2, got b={benefit}, n={n}"));
    }
    let n = n as f64;
    Ok((cost * n - benefit) / (benefit * (n - 1.0)))
}

/// Hamilton's rule: `rb > c`.
pub fn hamilton_invade(relatedness: f64, benefit: f64, cost: f64) -> bool {
    relatedness * benefit > cost
}

/// Advances utility-type shares by `dt` under constant induced fitness.
///
/// Uses the exact flow `yᵢ ← yᵢ e^{Fᵢ dt} / Σ`, so every log-ratio moves by
/// exactly `(F_A − F_B) dt`.
pub fn usdi_step(shares: &[f64], fitness: &[f64], dt: f64) -> Result<Vec<f64>> {
    if shares.len() != fitness.len() || shares.is_empty() {
        return validation("shares and fitness must have the same nonzero length");
    }
    let total: f64 = shares.iter().sum();
    if shares.iter().any(|&y| !(y >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return validation("shares must lie on the simplex");
    }
    if !(dt >= 0.0) {
        return validation("dt must be >= 0");
    }
    let top = fitness.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = shares.iter().zip(fitness).map(|(y, f)| y * ((f - top) * dt).exp()).collect();
    let z: f64 = w.iter().sum();
    Ok(w.into_iter().map(|v| v / z).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountUnification {
    pub rho_amplifier: f64,
    pub lineage_shadow: f64,
    pub delta_eff: f64,
}

/// Links a fundamental discount `b` and growth `g` to the expectational
/// amplifier `ρ = b/(1−bg)` and the lineage shadow with `γ₀ = 1 − b`.
pub fn unify_discounts(b: f64, growth: f64, quality: f64, gamma1: f64, nu: f64) -> Result<DiscountUnification> {
    if !(b > 0.0 && b <= 1.0) {
        return validation(format!("fundamental discount must lie in (0, 1], got {b}"));
    }
    if b * growth >= 1.0 {
        return validation(format!("b*g = {} must be < 1", b * growth));
    }
    let shadow = ShadowParams { gamma0: 1.0 - b, gamma1, nu };
    shadow.validate()?;
    let varrho = lineage_shadow(quality, &shadow)?;
    Ok(DiscountUnification { rho_amplifier: b / (1.0 - b * growth), lineage_shadow: varrho, delta_eff: 1.0 / varrho })
}

/// Cooperation under grim trigger holds iff `δ_eff ≥ δ*`.
pub fn cooperation_sustainable(delta_eff: f64, t: f64, r: f64, p: f64) -> Result<bool> {
    Ok(delta_eff >= grim_trigger_threshold(t, r, p)?)
}
