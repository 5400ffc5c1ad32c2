use crate::error::Result;
use crate::fitness::FitnessModel;
use crate::simplex::PopulationState;

/// Fitness equalization tolerance.
pub const ESDI_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsdiReport {
    /// Every supported type earns the mean fitness.
    pub is_equilibrium: bool,
    /// Additionally, no absent type would earn more than the mean.
    pub is_stable_candidate: bool,
    /// Largest `|f_j − f̄|` over the support.
    pub roc_gap: f64,
}

pub fn esdi_verify(state: &PopulationState, model: &FitnessModel) -> Result<EsdiReport> {
    let f = model.fitness(state)?;
    let x = state.shares();
    let mean: f64 = x.iter().zip(&f).map(|(a, b)| a * b).sum();
    let support = state.support();
    let roc_gap = support.iter().map(|&j| (f[j] - mean).abs()).fold(0.0, f64::max);
    let is_equilibrium = roc_gap <= ESDI_TOL;
    let no_invader = (0..x.len()).filter(|j| !support.contains(j)).all(|j| f[j] <= mean + ESDI_TOL);
    Ok(EsdiReport { is_equilibrium, is_stable_candidate: is_equilibrium && no_invader, roc_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordination_interior_and_vertex() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let r = esdi_verify(&PopulationState::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap(), &m).unwrap();
        assert!(r.is_equilibrium);
        let r = esdi_verify(&PopulationState::vertex(2, 0).unwrap(), &m).unwrap();
        assert!(r.is_equilibrium && r.is_stable_candidate);
        let r = esdi_verify(&PopulationState::new(vec![0.5, 0.5]).unwrap(), &m).unwrap();
        assert!(!r.is_equilibrium);
        assert!((r.roc_gap - 0.25).abs() < 1e-12);
    }

    #[test]
    fn uniform_rps() {
        let r = esdi_verify(&PopulationState::uniform(3).unwrap(), &FitnessModel::rps()).unwrap();
        assert!(r.is_equilibrium && r.is_stable_candidate);
    }
}
