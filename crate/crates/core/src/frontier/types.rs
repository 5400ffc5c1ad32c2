use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

/// An agent type: return per instance per unit time, cost per instance and
/// capacity load per instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentTypeSpec {
    #[serde(rename = "return")]
    pub return_rate: f64,
    pub cost: f64,
    pub load: f64,
}

impl AgentTypeSpec {
    pub fn new(return_rate: f64, cost: f64, load: f64) -> Result<Self> {
        let t = AgentTypeSpec { return_rate, cost, load };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cost > 0.0) || !self.cost.is_finite() {
            return validation(format!("cost must be positive, got {}", self.cost));
        }
        if !(self.load > 0.0) || !self.load.is_finite() {
            return validation(format!("load must be positive, got {}", self.load));
        }
        if !(self.return_rate >= 0.0) || !self.return_rate.is_finite() {
            return validation(format!("return must be nonnegative, got {}", self.return_rate));
        }
        Ok(())
    }
}

/// A type seen per unit of cost: `a = ℓ/c`, `b = r/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub load_per_cost: f64,
    pub return_per_cost: f64,
    pub source_type: usize,
}

pub fn normalize_types(types: &[AgentTypeSpec]) -> Result<Vec<FrontierPoint>> {
    if types.is_empty() {
        return validation("no agent types given");
    }
    types
        .iter()
        .enumerate()
        .map(|(i, t)| {
            t.validate()?;
            Ok(FrontierPoint {
                load_per_cost: t.load / t.cost,
                return_per_cost: t.return_rate / t.cost,
                source_type: i,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(r: f64, c: f64, l: f64) -> (f64, f64) {
        let p = normalize_types(&[AgentTypeSpec { return_rate: r, cost: c, load: l }]).unwrap()[0];
        (p.load_per_cost, p.return_per_cost)
    }

    #[test]
    fn barbell_table() {
        assert_eq!(ab(1.0, 1.0, 1.0), (1.0, 1.0));
        let (a, b) = ab(2.4, 2.0, 1.8);
        assert!((a - 0.9).abs() < 1e-12 && (b - 1.2).abs() < 1e-12);
        assert_eq!(ab(8.0, 5.0, 4.0), (0.8, 1.6));
        assert_eq!(ab(0.0, 1.0, 1.0), (1.0, 0.0));
        assert_eq!(ab(3.0, 2.0, 4.0), (2.0, 1.5));
    }

    #[test]
    fn nonpositive_cost_is_rejected() {
        let bad = AgentTypeSpec { return_rate: 1.0, cost: 0.0, load: 1.0 };
        assert!(matches!(normalize_types(&[bad]), Err(crate::Error::Validation(_))));
        assert!(AgentTypeSpec::new(1.0, -1.0, 1.0).is_err());
        assert!(normalize_types(&[]).is_err());
    }
}
