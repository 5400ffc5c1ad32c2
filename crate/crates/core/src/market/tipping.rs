use serde::Deserialize;

use crate::error::{validation, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TippingParams {
    pub alpha_intrinsic: f64,
    pub beta_network: f64,
    pub tau_friction: f64,
    pub rho_discount: f64,
    #[serde(default)]
    pub spawn_elasticity: f64,
}

impl TippingParams {
    pub fn new(alpha: f64, beta: f64, tau: f64, rho: f64, spawn_elasticity: f64) -> Result<Self> {
        let p = TippingParams {
            alpha_intrinsic: alpha,
            beta_network: beta,
            tau_friction: tau,
            rho_discount: rho,
            spawn_elasticity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha_intrinsic.is_finite() {
            return validation("alpha must be finite");
        }
        if !(self.beta_network >= 0.0 && self.beta_network.is_finite()) {
            return validation(format!("beta must be >= 0, got {}", self.beta_network));
        }
        if !(self.tau_friction > 0.0 && self.tau_friction.is_finite()) {
            return validation(format!("tau must be > 0, got {}", self.tau_friction));
        }
        if !(0.0..1.0).contains(&self.rho_discount) {
            return validation(format!("rho must lie in [0, 1), got {}", self.rho_discount));
        }
        if !(self.spawn_elasticity >= 0.0 && self.spawn_elasticity.is_finite()) {
            return validation(format!("spawn elasticity must be >= 0, got {}", self.spawn_elasticity));
        }
        Ok(())
    }
}

/// `(α + β) / τ`.
pub fn myopic_slope(p: &TippingParams) -> f64 {
    (p.alpha_intrinsic + p.beta_network) / p.tau_friction
}

/// `s / (1 − ρs)`; expectations diverge once `ρs ≥ 1`.
pub fn tipping_index(slope: f64, rho: f64) -> Result<f64> {
    let rs = rho * slope;
    if rs >= 1.0 {
        return Err(Error::DivergentExpectations(rs));
    }
    Ok(slope / (1.0 - rs))
}

/// `S_myo · (1 + ε_s β/τ)`.
pub fn spawn_adjusted_slope(p: &TippingParams) -> f64 {
    myopic_slope(p) * (1.0 + p.spawn_elasticity * p.beta_network / p.tau_friction)
}

/// `τ/(1+ρ) − α`, lowered further by the rent-extracting part of β when given.
pub fn beta_crit(tau: f64, rho: f64, alpha: f64, beta_power: Option<f64>) -> Result<f64> {
    if !(tau > 0.0) {
        return validation(format!("tau must be > 0, got {tau}"));
    }
    if let Some(bp) = beta_power {
        if !(bp >= 0.0) {
            return validation(format!("beta_power must be >= 0, got {bp}"));
        }
    }
    Ok(tau / (1.0 + rho) - alpha - beta_power.unwrap_or(0.0))
}

/// Conventional S-curve steepness `4T` for tipping index `T`.
pub fn default_steepness(tipping_index: f64) -> f64 {
    4.0 * tipping_index
}

/// Iterates `m ← 1/(1 + e^{−k(m − ½)})`; the returned trajectory starts at `m₀`.
pub fn iterate_s_curve(m0: f64, steepness: f64, steps: usize) -> Result<Vec<f64>> {
    if !(m0 > 0.0 && m0 < 1.0) {
        return validation(format!("initial share must lie in (0, 1), got {m0}"));
    }
    if !(steepness > 0.0 && steepness.is_finite()) {
        return validation(format!("steepness must be > 0, got {steepness}"));
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut m = m0;
    out.push(m);
    for _ in 0..steps {
        m = 1.0 / (1.0 + (-steepness * (m - 0.5)).exp());
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act() -> TippingParams {
        TippingParams::new(0.3, 0.6, 0.8, 0.2, 1.5).unwrap()
    }

    #[test]
    fn slopes_and_indices() {
        let p = act();
        assert!((myopic_slope(&p) - 1.125).abs() < 1e-15);
        assert!((tipping_index(1.125, 0.2).unwrap() - 1.125 / 0.775).abs() < 1e-15);
        assert_eq!(tipping_index(0.7, 0.0).unwrap(), 0.7);
        let s = spawn_adjusted_slope(&p);
        assert!((s - 1.125 * 2.125).abs() < 1e-15);
        assert!((tipping_index(s, 0.2).unwrap() - 4.58).abs() < 0.01);
        let q = TippingParams::new(0.1, 0.2, 0.5, 0.0, 0.0).unwrap();
        assert!((myopic_slope(&q) - 0.6).abs() < 1e-15);
        assert_eq!(spawn_adjusted_slope(&q), myopic_slope(&q));
        let r = TippingParams::new(0.1, 0.5, 0.5, 0.0, 1.0).unwrap();
        assert!((spawn_adjusted_slope(&r) - 2.0 * myopic_slope(&r)).abs() < 1e-15);
        assert_eq!(myopic_slope(&TippingParams::new(0.0, 0.0, 1.0, 0.0, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn divergence() {
        assert!(matches!(tipping_index(5.0, 0.2), Err(Error::DivergentExpectations(_))));
        assert!(TippingParams::new(0.1, 0.1, 0.0, 0.1, 0.0).is_err());
    }

    #[test]
    fn thresholds() {
        assert!((beta_crit(0.8, 0.2, 0.3, None).unwrap() - 0.36667).abs() < 1e-4);
        let neutral = beta_crit(0.8, 0.2, 0.0, None).unwrap();
        assert!(neutral > 0.6);
        assert_eq!(beta_crit(0.7, 0.0, 0.0, None).unwrap(), 0.7);
        assert!(beta_crit(0.8, 0.2, 0.3, Some(0.1)).unwrap() < beta_crit(0.8, 0.2, 0.3, None).unwrap());
    }

    #[test]
    fn s_curve_shapes() {
        assert!(iterate_s_curve(0.5, 5.8, 20).unwrap().iter().all(|&m| m == 0.5));
        let down = iterate_s_curve(0.45, 5.8, 30).unwrap();
        assert!(down.windows(2).all(|w| w[1] < w[0]));
        let up = iterate_s_curve(0.55, 5.8, 30).unwrap();
        for (u, d) in up.iter().zip(&down) {
            assert!((u + d - 1.0).abs() < 1e-12);
        }
        assert!(iterate_s_curve(1.0, 5.8, 3).is_err());
    }
}
