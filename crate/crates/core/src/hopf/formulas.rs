use crate::error::{validation, Result};
use crate::fitness::Matrix;

/// `[[0, −1, 1+κ], [1+κ, 0, −1], [−1, 1+κ, 0]]`.
pub fn biased_rps_matrix(kappa: f64) -> Matrix {
    let w = 1.0 + kappa;
    Matrix::from_row_slice(3, 3, &[0.0, -1.0, w, w, 0.0, -1.0, -1.0, w, 0.0])
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0 / 3.0) {
        return validation(format!("mu must lie in (0, 1/3), got {mu}"));
    }
    Ok(())
}

/// `κ_c(μ) = (1 − √(1−3μ))/(3μ) · (1 − μ)`, evaluated as the equivalent
/// `(1 − μ)/(1 + √(1−3μ))` to avoid cancellation at small μ.
pub fn hopf_curve(mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok((1.0 - mu) / (1.0 + (1.0 - 3.0 * mu).sqrt()))
}

/// `ℓ₁(μ) = −(√3/8)(1 − 3μ)/(1 − μ)²`; vanishes at μ = 1/3.
pub fn first_lyapunov_coefficient(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= 1.0 / 3.0) {
        return validation(format!("mu must lie in (0, 1/3], got {mu}"));
    }
    Ok(-(3f64.sqrt() / 8.0) * (1.0 - 3.0 * mu) / ((1.0 - mu) * (1.0 - mu)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub value: f64,
    /// κ ≥ κ_c: no cycle, the value is 0.
    pub stable_side: bool,
}

/// `√((1−3μ)/(54√3 μ)) · √(κ_c − κ)` on the oscillatory side.
pub fn predicted_amplitude(kappa: f64, mu: f64) -> Result<Amplitude> {
    let kc = hopf_curve(mu)?;
    if kappa >= kc {
        return Ok(Amplitude { value: 0.0, stable_side: true });
    }
    let c = ((1.0 - 3.0 * mu) / (54.0 * 3f64.sqrt() * mu)).sqrt();
    Ok(Amplitude { value: c * (kc - kappa).sqrt(), stable_side: false })
}
