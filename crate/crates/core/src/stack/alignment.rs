use crate::error::{validation, Result};
use crate::fitness::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentReport {
    /// Cosines between the channel gradients.
    pub matrix: Matrix,
    pub min_eigenvalue: f64,
}

impl AlignmentReport {
    /// `A ⪰ α₀ I`.
    pub fn strong_alignment(&self, alpha0: f64) -> bool {
        self.min_eigenvalue >= alpha0 - 1e-12
    }
}

pub fn alignment_analysis(gradients: &[Vec<f64>]) -> Result<AlignmentReport> {
    let k = gradients.len();
    if k == 0 {
        return validation("no gradients given");
    }
    let d = gradients[0].len();
    if gradients.iter().any(|g| g.len() != d) {
        return validation("gradients have different lengths");
    }
    let norms: Vec<f64> = gradients.iter().map(|g| g.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    if let Some(i) = norms.iter().position(|&n| !(n > 0.0) || !n.is_finite()) {
        return validation(format!("gradient {i} is zero or non-finite"));
    }
    let matrix = Matrix::from_fn(k, k, |i, j| {
        if i == j {
            1.0
        } else {
            gradients[i].iter().zip(&gradients[j]).map(|(a, b)| a * b).sum::<f64>() / (norms[i] * norms[j])
        }
    });
    let min_eigenvalue = matrix.clone().symmetric_eigenvalues().min();
    Ok(AlignmentReport { matrix, min_eigenvalue })
}

/// Alignment magnitude `|A₁₂|` above which two bilinearly coupled channels
/// with self-externalities γ₁, γ₂ lose stability to a limit cycle.
pub fn misalignment_hopf_threshold(gamma1: f64, gamma2: f64) -> Result<f64> {
    if !(gamma1 > 0.0 && gamma1 < 1.0 && gamma2 > 0.0 && gamma2 < 1.0) {
        return validation(format!("gammas must lie in (0, 1), got {gamma1} and {gamma2}"));
    }
    Ok((gamma1 * gamma2 / ((1.0 - gamma1) * (1.0 - gamma2))).sqrt())
}
