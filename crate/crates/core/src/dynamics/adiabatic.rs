use crate::dynamics::price::dot;
use crate::error::{config, Error, Result};
use crate::ode::{step_schedule, Rk4};
use crate::simplex::renormalize_in_place;

/// A fitness family `f(x; θ)` with a unique stable interior equilibrium
/// for every frozen `θ`.
pub trait AdiabaticFamily {
    fn dim(&self) -> usize;
    fn fitness(&self, theta: f64, x: &[f64], out: &mut [f64]);
    /// The equilibrium of the frozen system; errors when it is not unique.
    fn equilibrium(&self, theta: f64) -> Result<Vec<f64>>;
}

/// Two-type congestion game `diag(−a, −θ)`: the frozen equilibrium share
/// of the first type is `θ / (a + θ)` and is globally stable.
#[derive(Debug, Clone, Copy)]
pub struct CongestionDrift {
    pub a: f64,
}

impl AdiabaticFamily for CongestionDrift {
    fn dim(&self) -> usize {
        2
    }

    fn fitness(&self, theta: f64, x: &[f64], out: &mut [f64]) {
        out[0] = -self.a * x[0];
        out[1] = -theta * x[1];
    }

    fn equilibrium(&self, theta: f64) -> Result<Vec<f64>> {
        let a = self.a;
        let x = two_type_root(|x| -a * x + theta * (1.0 - x))?;
        Ok(vec![x, 1.0 - x])
    }
}

/// Unique sign change of `gap` on (0, 1), refined by bisection.
fn two_type_root<G: Fn(f64) -> f64>(gap: G) -> Result<f64> {
    const SCAN: usize = 200;
    let mut bracket = None;
    let mut changes = 0;
    let mut prev = gap(0.0);
    for k in 1..=SCAN {
        let x = k as f64 / SCAN as f64;
        let cur = gap(x);
        if cur != 0.0 && prev != 0.0 && prev.signum() != cur.signum() {
            changes += 1;
            bracket = Some(((k - 1) as f64 / SCAN as f64, x, prev));
        }
        if cur == 0.0 && k < SCAN {
            changes += 1;
            bracket = Some((x, x, 1.0));
        }
        prev = cur;
    }
    let (mut lo, mut hi, g_lo) = match (changes, bracket) {
        (1, Some(b)) => b,
        _ => {
            return Err(Error::Diagnostic(format!(
                "equilibrium tracker lost uniqueness ({changes} sign changes)"
            )))
        }
    };
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if gap(mid).signum() == g_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticReport {
    pub epsilons: Vec<f64>,
    /// `max_t ‖x(t) − x*(θ(t))‖₂` per drift speed.
    pub max_errors: Vec<f64>,
    /// `ε · max|dx*/dθ| / λ₀` per drift speed.
    pub predicted_bounds: Vec<f64>,
    /// Log-log slope of error against ε; `None` for ε₀ = 0.
    pub scaling_slope: Option<f64>,
}

/// Runs the drifting system `θ(t) = θ_start + ε t` across
/// `[θ_start, θ_end]` for `ε ∈ {ε₀, ε₀/2, ε₀/4}`, starting on the frozen
/// equilibrium, and measures the tracking error.
///
/// With `ε₀ = 0` the parameters stay frozen at `θ_start` over a horizon of
/// 50 time units.
pub fn adiabatic_tracking_check<F: AdiabaticFamily>(
    family: &F,
    theta_start: f64,
    theta_end: f64,
    eps0: f64,
    lambda0: f64,
    step: f64,
) -> Result<AdiabaticReport> {
    if !(eps0 >= 0.0) || !(step > 0.0) || !(lambda0 > 0.0) {
        return config("drift speed must be nonnegative; step and contraction rate positive");
    }
    let n = family.dim();
    // uniqueness along the sweep
    let probe = 20;
    let mut max_slope = 0.0f64;
    let mut prev = family.equilibrium(theta_start)?;
    for k in 1..=probe {
        let th = theta_start + (theta_end - theta_start) * k as f64 / probe as f64;
        let cur = family.equilibrium(th)?;
        let d = dist(&cur, &prev) / ((theta_end - theta_start).abs() / probe as f64).max(1e-300);
        max_slope = max_slope.max(d);
        prev = cur;
    }
    let epsilons = vec![eps0, eps0 / 2.0, eps0 / 4.0];
    let dir = (theta_end - theta_start).signum();
    let span = (theta_end - theta_start).abs();
    let mut max_errors = Vec::with_capacity(3);
    for &eps in &epsilons {
        let horizon = if eps > 0.0 { span / eps } else { 50.0 };
        let theta_at = |t: f64| theta_start + dir * eps * t;
        let mut x = family.equilibrium(theta_start)?;
        let mut rk = Rk4::new(n);
        let mut f = vec![0.0; n];
        let mut field = |t: f64, x: &[f64], dx: &mut [f64]| {
            family.fitness(theta_at(t), x, &mut f);
            let m = dot(x, &f);
            for j in 0..n {
                dx[j] = x[j] * (f[j] - m);
            }
        };
        let mut worst = 0.0f64;
        for (t, h) in step_schedule(horizon, step) {
            rk.step(&mut field, t, &mut x, h);
            renormalize_in_place(&mut x, 0.0)?;
            let target = family.equilibrium(theta_at(t + h))?;
            worst = worst.max(dist(&x, &target));
        }
        max_errors.push(worst);
    }
    let scaling_slope = if eps0 > 0.0 && max_errors.iter().all(|&e| e > 0.0) {
        let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
        let ys: Vec<f64> = max_errors.iter().map(|e| e.ln()).collect();
        Some(crate::stats::linear_fit(&xs, &ys).slope)
    } else {
        None
    };
    let predicted_bounds = epsilons.iter().map(|e| e * max_slope / lambda0).collect();
    Ok(AdiabaticReport { epsilons, max_errors, predicted_bounds, scaling_slope })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_parameters_track_exactly() {
        let fam = CongestionDrift { a: 1.0 };
        let r = adiabatic_tracking_check(&fam, 1.0, 2.0, 0.0, 1.0, 0.01).unwrap();
        assert!(r.max_errors.iter().all(|&e| e < 1e-12));
        assert_eq!(r.scaling_slope, None);
    }

    #[test]
    fn error_linear_in_drift_speed() {
        let fam = CongestionDrift { a: 1.0 };
        let r = adiabatic_tracking_check(&fam, 1.0, 2.0, 0.01, 0.5, 0.02).unwrap();
        let slope = r.scaling_slope.unwrap();
        assert!((0.7..=1.3).contains(&slope), "slope {slope}");
        for w in r.max_errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!((2.0 / 1.5..=2.0 * 1.5).contains(&ratio), "ratio {ratio}");
        }
        // oracle: x*(θ) = θ / (1 + θ)
        let x = fam.equilibrium(1.5).unwrap();
        assert!((x[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn lost_uniqueness_is_diagnostic() {
        struct Coord;
        impl AdiabaticFamily for Coord {
            fn dim(&self) -> usize {
                2
            }
            fn fitness(&self, theta: f64, x: &[f64], out: &mut [f64]) {
                out[0] = 2.0 * x[0];
                out[1] = theta * x[1];
            }
            fn equilibrium(&self, theta: f64) -> Result<Vec<f64>> {
                // f_A − f_B never changes sign for θ < 0
                let x = two_type_root(|x| 2.0 * x - theta * (1.0 - x))?;
                Ok(vec![x, 1.0 - x])
            }
        }
        let r = adiabatic_tracking_check(&Coord, -2.0, -1.0, 0.01, 1.0, 0.01);
        assert!(matches!(r, Err(Error::Diagnostic(_))));
    }
}
