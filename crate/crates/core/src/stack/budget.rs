use crate::error::{validation, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SlackBudget {
    /// `s_k = −ln(1 − θ_k)`.
    pub costs: Vec<f64>,
    pub total: f64,
    /// `B = ln(σ₀ / σ_min)`.
    pub budget: f64,
    /// `σ₀ Π (1 − θ_k)`.
    pub remaining_slack: f64,
    pub safe: bool,
}

pub fn slack_budget(thetas: &[f64], sigma0: f64, sigma_min: f64) -> Result<SlackBudget> {
    if !(sigma_min > 0.0) || !(sigma0 > sigma_min) {
        return validation(format!("need sigma0 > sigma_min > 0, got {sigma0} and {sigma_min}"));
    }
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return validation(format!("extension cost {t} outside (0, 1)"));
    }
    let costs: Vec<f64> = thetas.iter().map(|t| -(-t).ln_1p()).collect();
    let total = costs.iter().sum();
    let budget = (sigma0 / sigma_min).ln();
    let remaining_slack = sigma0 * thetas.iter().map(|t| 1.0 - t).product::<f64>();
    Ok(SlackBudget { costs, total, budget, remaining_slack, safe: total <= budget })
}

/// `⌊ln(σ₀/σ_min) / θ⌋` extensions of uniform cost θ.
pub fn safe_depth_uniform(theta: f64, sigma0: f64, sigma_min: f64) -> Result<usize> {
    if !(theta > 0.0 && theta < 1.0) {
        return validation(format!("extension cost {theta} outside (0, 1)"));
    }
    if !(sigma_min > 0.0) || !(sigma0 > sigma_min) {
        return validation(format!("need sigma0 > sigma_min > 0, got {sigma0} and {sigma_min}"));
    }
    Ok(((sigma0 / sigma_min).ln() / theta).floor() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_list() {
        let b = slack_budget(&[], 0.5, 0.1).unwrap();
        assert_eq!(b.total, 0.0);
        assert_eq!(b.remaining_slack, 0.5);
        assert!(b.safe);
    }

    #[test]
    fn log_domain_identity() {
        let b = slack_budget(&[0.05, 0.08, 0.06], 0.5, 0.1).unwrap();
        assert!((b.remaining_slack - 0.5 * (-b.total).exp()).abs() < 1e-12);
    }

    #[test]
    fn uniform_depth_floors() {
        assert_eq!(safe_depth_uniform(0.07, 0.5, 0.1).unwrap(), 22);
        assert!(safe_depth_uniform(0.0, 0.5, 0.1).is_err());
        assert!(slack_budget(&[0.1], 0.1, 0.5).is_err());
    }
}
