use crate::error::Result;
use crate::fitness::FitnessModel;
use crate::simplex::PopulationState;

/// Price-equation terms at one state: `d f̄/dt = variance + externality`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceTerms {
    pub mean_fitness: f64,
    pub variance: f64,
    pub externality: f64,
    /// `|externality| / variance`; `None` when the variance vanishes.
    pub gamma_estimate: Option<f64>,
}

/// `Σ x_j f_j(x)`.
pub fn mean_fitness(state: &PopulationState, model: &FitnessModel) -> Result<f64> {
    let f = model.fitness(state)?;
    Ok(dot(state.shares(), &f))
}

/// `Σ x_j (f_j − f̄)²`.
pub fn variance(state: &PopulationState, model: &FitnessModel) -> Result<f64> {
    let f = model.fitness(state)?;
    Ok(variance_of(state.shares(), &f))
}

/// `ẋ_j = x_j (f_j − f̄)`.
pub fn replicator_velocity(state: &PopulationState, model: &FitnessModel) -> Result<Vec<f64>> {
    let f = model.fitness(state)?;
    Ok(velocity_of(state.shares(), &f))
}

pub fn price_decomposition(state: &PopulationState, model: &FitnessModel) -> Result<PriceTerms> {
    let f = model.fitness(state)?;
    Ok(price_terms_raw(model, state.shares(), &f))
}

pub(crate) fn price_terms_raw(model: &FitnessModel, x: &[f64], f: &[f64]) -> PriceTerms {
    let mean = dot(x, f);
    let var = variance_of(x, f);
    let xdot = velocity_of(x, f);
    let jac = model.jacobian(x);
    let externality: f64 = x
        .iter()
        .zip(jac.iter())
        .map(|(xj, row)| xj * dot(row, &xdot))
        .sum();
    PriceTerms {
        mean_fitness: mean,
        variance: var,
        externality,
        gamma_estimate: if var > 0.0 { Some(externality.abs() / var) } else { None },
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn variance_of(x: &[f64], f: &[f64]) -> f64 {
    let m = dot(x, f);
    x.iter().zip(f).map(|(xj, fj)| xj * (fj - m) * (fj - m)).sum::<f64>().max(0.0)
}

pub(crate) fn velocity_of(x: &[f64], f: &[f64]) -> Vec<f64> {
    let m = dot(x, f);
    x.iter().zip(f).map(|(xj, fj)| xj * (fj - m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate_replicator;

    #[test]
    fn mean_fitness_examples() {
        let rps = FitnessModel::rps();
        let u = PopulationState::uniform(3).unwrap();
        assert!(mean_fitness(&u, &rps).unwrap().abs() < 1e-15);

        let coord = FitnessModel::coordination(2.0, 1.0);
        let e1 = PopulationState::vertex(2, 0).unwrap();
        assert_eq!(mean_fitness(&e1, &coord).unwrap(), 2.0);
        let half = PopulationState::new(vec![0.5, 0.5]).unwrap();
        assert!((mean_fitness(&half, &coord).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn constant_fitness_has_no_selection() {
        let m = FitnessModel::constant(&[1.3, 1.3, 1.3]).unwrap();
        let s = PopulationState::new(vec![0.2, 0.3, 0.5]).unwrap();
        let p = price_decomposition(&s, &m).unwrap();
        assert!(p.variance.abs() < 1e-15);
        assert!(p.externality.abs() < 1e-15);
        assert_eq!(p.gamma_estimate, None);
    }

    #[test]
    fn coordination_closed_form() {
        // d f̄/dt = 2x(1−x)((a+b)x−b)² = 0.125 at x = 0.5, a = 2, b = 1.
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        let p = price_decomposition(&s, &m).unwrap();
        assert!((p.variance + p.externality - 0.125).abs() < 1e-14);
        assert!((p.externality - (0.125 - p.variance)).abs() < 1e-14);
        assert!((p.variance - 0.0625).abs() < 1e-14);
    }

    #[test]
    fn externality_matches_trajectory_derivative() {
        // Symmetric payoff, interior point: finite-difference d f̄/dt along a
        // short integrated trajectory minus the variance.
        let m = FitnessModel::from_rows(&[
            vec![1.0, 0.3, -0.2],
            vec![0.3, 0.5, 0.4],
            vec![-0.2, 0.4, 0.8],
        ])
        .unwrap();
        let s = PopulationState::new(vec![0.3, 0.3, 0.4]).unwrap();
        let p = price_decomposition(&s, &m).unwrap();
        let h = 1e-4;
        let fwd = integrate_replicator(&s, &m, h, h / 10.0).unwrap();
        let fbar = |st: &PopulationState| mean_fitness(st, &m).unwrap();
        // backward leg via the time-reversed field (negated payoff)
        let neg = FitnessModel::linear(-m.payoff().unwrap().clone()).unwrap();
        let bwd = integrate_replicator(&s, &neg, h, h / 10.0).unwrap();
        let deriv = (fbar(fwd.final_state()) - fbar(bwd.final_state())) / (2.0 * h);
        let oracle_ext = deriv - p.variance;
        assert!((oracle_ext - p.externality).abs() < 1e-6 * deriv.abs().max(1.0));
    }
}
