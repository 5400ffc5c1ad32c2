use std::io::Write;

use crate::dynamics::price::{dot, price_terms_raw};
use crate::error::{config, Error, Result};
use crate::fitness::FitnessModel;
use crate::ode::{step_schedule, Rk4};
use crate::simplex::PopulationState;

/// A sampled replicator trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PopulationState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &PopulationState {
        self.states.last().expect("trajectory always holds the initial state")
    }

    /// Writes `t,x_0,...,x_{n-1},mean_fitness,variance,externality`.
    pub fn write_csv<W: Write>(&self, model: &FitnessModel, out: W) -> Result<()> {
        let n = self.states.first().map_or(0, PopulationState::dim);
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend((0..n).map(|i| format!("x_{i}")));
        header.extend(["mean_fitness", "variance", "externality"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let f = model.fitness(s)?;
            let p = price_terms_raw(model, s.shares(), &f);
            let mut row = vec![t.to_string()];
            row.extend(s.shares().iter().map(f64::to_string));
            row.push(p.mean_fitness.to_string());
            row.push(p.variance.to_string());
            row.push(p.externality.to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Numerical(format!("csv: {other:?}")),
    }
}

/// Integrates `ẋ_j = x_j (f_j − f̄)` with fixed-step RK4, recording every
/// step. Each state is clamped at the extinction threshold and
/// renormalized.
pub fn integrate_replicator(
    state: &PopulationState,
    model: &FitnessModel,
    horizon: f64,
    step: f64,
) -> Result<Trajectory> {
    integrate_replicator_sampled(state, model, horizon, step, 1)
}

/// As [`integrate_replicator`] but records every `stride`-th step (the
/// final state is always recorded).
pub fn integrate_replicator_sampled(
    state: &PopulationState,
    model: &FitnessModel,
    horizon: f64,
    step: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(step > 0.0) || !step.is_finite() {
        return config(format!("integration step must be positive, got {step}"));
    }
    if !(horizon >= 0.0) || !horizon.is_finite() {
        return config(format!("horizon must be nonnegative, got {horizon}"));
    }
    if stride == 0 {
        return config("record stride must be positive");
    }
    model.check_dim(state.dim())?;
    let n = state.dim();
    let mut rk = Rk4::new(n);
    let mut x = state.shares().to_vec();
    let mut f = vec![0.0; n];
    let blown = std::cell::Cell::new(false);
    let mut field = |_t: f64, x: &[f64], dx: &mut [f64]| {
        model.fitness_into(x, &mut f);
        let m = dot(x, &f);
        for j in 0..n {
            dx[j] = x[j] * (f[j] - m);
        }
        if !m.is_finite() {
            blown.set(true);
        }
    };
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![state.clone()],
    };
    let mut current = state.clone();
    let steps: Vec<_> = step_schedule(horizon, step).collect();
    let last = steps.len();
    for (k, (t, h)) in steps.into_iter().enumerate() {
        rk.step(&mut field, t, &mut x, h);
        let t1 = t + h;
        if blown.get() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalBlowup {
                time: t1,
                detail: "non-finite fitness during integration".into(),
            });
        }
        current.set_from_raw(&x).map_err(|e| Error::NumericalBlowup {
            time: t1,
            detail: e.to_string(),
        })?;
        x.copy_from_slice(current.shares());
        if (k + 1) % stride == 0 || k + 1 == last {
            traj.times.push(t1);
            traj.states.push(current.clone());
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::mean_fitness;

    #[test]
    fn coordination_converges_to_a() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        let tr = integrate_replicator(&s, &m, 30.0, 0.01).unwrap();
        assert!(tr.final_state().shares()[0] > 1.0 - 1e-3);
        assert!((tr.times.last().unwrap() - 30.0).abs() < 1e-12);
    }

    #[test]
    fn coordination_interior_fixed_point() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let tr = integrate_replicator(&s, &m, 50.0, 0.01).unwrap();
        for st in &tr.states {
            assert!((st.shares()[0] - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rps_conserves_zero_mean_and_cycles() {
        let m = FitnessModel::rps();
        let s = PopulationState::new(vec![0.5, 0.3, 0.2]).unwrap();
        let tr = integrate_replicator_sampled(&s, &m, 100.0, 0.01, 10).unwrap();
        let c = 1.0 / 3.0;
        let mut min_dist = f64::INFINITY;
        for st in &tr.states {
            assert!(mean_fitness(st, &m).unwrap().abs() < 1e-12);
            let d: f64 = st.shares().iter().map(|x| (x - c) * (x - c)).sum::<f64>().sqrt();
            min_dist = min_dist.min(d);
        }
        let start: f64 = s.shares().iter().map(|x| (x - c) * (x - c)).sum::<f64>().sqrt();
        assert!(min_dist > 0.5 * start, "orbit approached center: {min_dist}");
    }

    #[test]
    fn zero_horizon_and_bad_step() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(integrate_replicator(&s, &m, 0.0, 0.1).unwrap().len(), 1);
        assert!(matches!(integrate_replicator(&s, &m, 1.0, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn blowup_names_time() {
        let m = FitnessModel::general(2, |x| vec![if x[0] > 0.55 { f64::NAN } else { 1.0 }, 0.0]);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        match integrate_replicator(&s, &m, 50.0, 0.01) {
            Err(Error::NumericalBlowup { time, .. }) => assert!(time > 0.0 && time < 50.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn csv_header() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        let tr = integrate_replicator(&s, &m, 0.1, 0.05).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x_0,x_1,mean_fitness,variance,externality\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
