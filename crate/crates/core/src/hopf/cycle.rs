use std::io::Write;

use nalgebra::Matrix2;

use super::formulas::{biased_rps_matrix, hopf_curve, predicted_amplitude};
use crate::dynamics::csv_err;
use crate::error::{config, validation, Result};
use crate::fitness::Matrix;
use crate::ode::{step_schedule, Rk4};
use crate::simplex::renormalize_in_place;
use crate::stats::linear_fit;

const CENTER: f64 = 1.0 / 3.0;
/// Post-transient radius below which the orbit counts as a point.
const POINT_RADIUS: f64 = 1e-6;
const BOUNDARY_SHARE: f64 = 1e-9;
/// Radii below this sit in round-off and are left out of the decay fit.
const FIT_FLOOR: f64 = 1e-12;

/// The biased RPS family with uniform mutation:
///
/// `ẋᵢ = xᵢ(fᵢ − f̄) + μ(1 − 3xᵢ)`,  `f = (Π(κ) + d·I) x`,
/// `d = (κ_c(μ) + 18μ)/2`.
///
/// The centre is always a rest point; its tangent-space eigenvalues have
/// real part `d/3 − κ/6 − 3μ`, which crosses zero exactly at `κ = κ_c(μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedRps {
    pub kappa: f64,
    pub mu: f64,
}

impl BiasedRps {
    pub fn new(kappa: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0 / 3.0) {
            return validation(format!("mu must lie in (0, 1/3), got {mu}"));
        }
        if !kappa.is_finite() {
            return validation("kappa must be finite");
        }
        Ok(BiasedRps { kappa, mu })
    }

    pub fn payoff(&self) -> Result<Matrix> {
        let d = 0.5 * (hopf_curve(self.mu)? + 18.0 * self.mu);
        Ok(biased_rps_matrix(self.kappa) + Matrix::identity(3, 3) * d)
    }

    fn field(payoff: &Matrix, mu: f64) -> impl Fn(f64, &[f64], &mut [f64]) + '_ {
        move |_t, x, dx| {
            let mut f = [0.0; 3];
            for i in 0..3 {
                f[i] = (0..3).map(|j| payoff[(i, j)] * x[j]).sum();
            }
            let m: f64 = (0..3).map(|i| x[i] * f[i]).sum();
            for i in 0..3 {
                dx[i] = x[i] * (f[i] - m) + mu * (1.0 - 3.0 * x[i]);
            }
        }
    }
}

/// Chart of the simplex tangent plane: `e₁ = (1,−1,0)/√2`,
/// `e₂ = (1,1,−2)/√6`, centred at the barycentre.
fn chart(x: &[f64]) -> (f64, f64) {
    let d = [x[0] - CENTER, x[1] - CENTER, x[2] - CENTER];
    ((d[0] - d[1]) / 2f64.sqrt(), (d[0] + d[1] - 2.0 * d[2]) / 6f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscillatorySide {
    BelowCritical,
    AboveCritical,
}

/// Which side of κ_c has an unstable centre, read off the numerical
/// Jacobian at `κ_c ± 0.01`.
pub fn hopf_orientation(mu: f64) -> Result<OscillatorySide> {
    let kc = hopf_curve(mu)?;
    let growth = |kappa: f64| -> Result<f64> {
        let p = BiasedRps::new(kappa, mu)?.payoff()?;
        let field = BiasedRps::field(&p, mu);
        let basis = [[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]];
        let norms = [2f64.sqrt(), 6f64.sqrt()];
        let h = 1e-6;
        let mut j = Matrix2::zeros();
        for c in 0..2 {
            let mut plus = [CENTER; 3];
            let mut minus = [CENTER; 3];
            for i in 0..3 {
                plus[i] += h * basis[c][i] / norms[c];
                minus[i] -= h * basis[c][i] / norms[c];
            }
            let (mut fp, mut fm) = ([0.0; 3], [0.0; 3]);
            field(0.0, &plus, &mut fp);
            field(0.0, &minus, &mut fm);
            let (p1, p2) = chart(&[fp[0] + CENTER, fp[1] + CENTER, fp[2] + CENTER]);
            let (m1, m2) = chart(&[fm[0] + CENTER, fm[1] + CENTER, fm[2] + CENTER]);
            j[(0, c)] = (p1 - m1) / (2.0 * h);
            j[(1, c)] = (p2 - m2) / (2.0 * h);
        }
        Ok(0.5 * j.trace())
    };
    let below = growth(kc - 0.01)?;
    let above = growth(kc + 0.01)?;
    if below > 0.0 && above < 0.0 {
        Ok(OscillatorySide::BelowCritical)
    } else if above > 0.0 && below < 0.0 {
        Ok(OscillatorySide::AboveCritical)
    } else {
        Err(crate::Error::Diagnostic(format!(
            "no stability change across kappa_c = {kc} (growth {below}, {above})"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycle {
    /// Largest chart radius after the transient.
    pub amplitude: f64,
    /// Mean spacing of upward crossings of the first chart axis.
    pub period: Option<f64>,
    pub converged_to_point: bool,
    /// Exponential decay rate of the radius after the transient, fitted
    /// when the orbit collapses onto the centre.
    pub decay_rate: Option<f64>,
    /// A share came within 1e-9 of zero; the run stopped there.
    pub boundary_escape: bool,
    pub oscillatory_side: OscillatorySide,
}

/// Integrates the family from a small displacement of the centre and
/// measures the post-transient orbit.
pub fn measure_limit_cycle(system: &BiasedRps, horizon: f64, transient_cut: f64, step: f64) -> Result<LimitCycle> {
    if !(horizon > transient_cut) || !(transient_cut >= 0.0) {
        return config(format!("horizon {horizon} must exceed the transient cut {transient_cut}"));
    }
    if !(step > 0.0) {
        return config("step must be positive");
    }
    let oscillatory_side = hopf_orientation(system.mu)?;
    let payoff = system.payoff()?;
    let mut field = BiasedRps::field(&payoff, system.mu);
    let mut rk = Rk4::new(3);
    let mut x = vec![CENTER + 0.01 / 2f64.sqrt(), CENTER - 0.01 / 2f64.sqrt(), CENTER];

    let mut amplitude: f64 = 0.0;
    let mut crossings = Vec::new();
    let mut log_r = (Vec::new(), Vec::new());
    let mut prev_u = chart(&x).0;
    let mut boundary_escape = false;
    for (t, h) in step_schedule(horizon, step) {
        rk.step(&mut field, t, &mut x, h);
        renormalize_in_place(&mut x, 0.0)?;
        if x.iter().any(|&v| v < BOUNDARY_SHARE) {
            boundary_escape = true;
            break;
        }
        let t1 = t + h;
        let (u, v) = chart(&x);
        if t1 >= transient_cut {
            let r = u.hypot(v);
            amplitude = amplitude.max(r);
            if r > FIT_FLOOR {
                log_r.0.push(t1);
                log_r.1.push(r.ln());
            }
            if prev_u < 0.0 && u >= 0.0 {
                crossings.push(t1 - h * u / (u - prev_u));
            }
        }
        prev_u = u;
    }
    let period = (crossings.len() >= 2)
        .then(|| (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64);
    let converged_to_point = !boundary_escape && amplitude < POINT_RADIUS;
    let decay_rate = (converged_to_point && log_r.0.len() >= 2).then(|| -linear_fit(&log_r.0, &log_r.1).slope);
    Ok(LimitCycle { amplitude, period, converged_to_point, decay_rate, boundary_escape, oscillatory_side })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    pub kappa: f64,
    pub kappa_c: f64,
    pub amplitude_predicted: f64,
    pub amplitude_measured: f64,
    pub period: Option<f64>,
}

/// Measured versus predicted amplitudes at each `κ`.
pub fn sweep(mu: f64, kappas: &[f64], horizon: f64, transient_cut: f64, step: f64) -> Result<Vec<SweepRow>> {
    let kappa_c = hopf_curve(mu)?;
    kappas
        .iter()
        .map(|&kappa| {
            let c = measure_limit_cycle(&BiasedRps::new(kappa, mu)?, horizon, transient_cut, step)?;
            Ok(SweepRow {
                mu,
                kappa,
                kappa_c,
                amplitude_predicted: predicted_amplitude(kappa, mu)?.value,
                amplitude_measured: c.amplitude,
                period: c.period,
            })
        })
        .collect()
}

/// CSV with header `mu,kappa,kappa_c,amplitude_predicted,amplitude_measured,period`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mu", "kappa", "kappa_c", "amplitude_predicted", "amplitude_measured", "period"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.mu.to_string(),
            r.kappa.to_string(),
            r.kappa_c.to_string(),
            r.amplitude_predicted.to_string(),
            r.amplitude_measured.to_string(),
            r.period.map_or(String::new(), |p| p.to_string()),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
