use std::fmt::Write as _;
use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dynamics::csv_err;
use crate::error::{config, validation, Error, Result};
use crate::fitness::FitnessModel;
use crate::rng::{stream, Purpose};
use crate::simplex::{renormalize_in_place, PopulationState};
use crate::stats::linear_fit;

/// Runs still inside the basin after this many steps are censored.
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// Noise intensity; increments have standard deviation `√(σΔt)`.
    pub sigma: f64,
    pub seed: u64,
    pub step: f64,
    pub runs: usize,
    pub max_steps: u64,
}

impl NoiseConfig {
    pub fn new(sigma: f64, seed: u64, step: f64, runs: usize) -> Result<Self> {
        let c = NoiseConfig { sigma, seed, step, runs, max_steps: DEFAULT_MAX_STEPS };
        c.validate()?;
        Ok(c)
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        NoiseConfig { sigma, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return validation(format!("noise intensity must be positive, got {}", self.sigma));
        }
        if !(self.step > 0.0) {
            return validation(format!("step must be positive, got {}", self.step));
        }
        if self.runs == 0 || self.max_steps == 0 {
            return validation("runs and max_steps must be at least 1");
        }
        Ok(())
    }
}

/// Escape times for one noise level.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapeSamples {
    pub sigma: f64,
    pub times: Vec<f64>,
    pub censored: Vec<bool>,
}

impl EscapeSamples {
    pub fn censored_count(&self) -> usize {
        self.censored.iter().filter(|&&c| c).count()
    }

    /// Mean over uncensored runs; `None` when every run was censored (the
    /// horizon is then only a lower bound).
    pub fn mean_escape_time(&self) -> Option<f64> {
        let done: Vec<f64> = self.times.iter().zip(&self.censored).filter(|(_, &c)| !c).map(|(t, _)| *t).collect();
        (!done.is_empty()).then(|| done.iter().sum::<f64>() / done.len() as f64)
    }

    pub fn lower_bound_only(&self) -> bool {
        self.censored_count() == self.times.len()
    }
}

fn run_escapes<S, B>(noise: &NoiseConfig, start: S, mut advance: B) -> EscapeSamples
where
    S: Fn() -> Option<Vec<f64>>,
    B: FnMut(&mut Vec<f64>, &mut rand_chacha::ChaCha8Rng) -> bool,
{
    let mut times = Vec::with_capacity(noise.runs);
    let mut censored = Vec::with_capacity(noise.runs);
    for run in 0..noise.runs {
        let Some(mut x) = start() else {
            times.push(0.0);
            censored.push(false);
            continue;
        };
        let mut rng = stream(noise.seed, Purpose::Escape, run as u64);
        let mut k = 0u64;
        let escaped = loop {
            if k == noise.max_steps {
                break false;
            }
            k += 1;
            if advance(&mut x, &mut rng) {
                break true;
            }
        };
        times.push(k as f64 * noise.step);
        censored.push(!escaped);
    }
    EscapeSamples { sigma: noise.sigma, times, censored }
}

/// Euler–Maruyama first-exit times of `dx = drift(x) dt + √σ dW` from
/// `start` until `boundary(x)` holds. Run `r` uses random stream `r`, so
/// samples are reproducible per `(seed, run)`.
pub fn simulate_escape<D, B>(drift: D, start: f64, boundary: B, noise: &NoiseConfig) -> Result<EscapeSamples>
where
    D: Fn(f64) -> f64,
    B: Fn(f64) -> bool,
{
    noise.validate()?;
    let (dt, amp) = (noise.step, (noise.sigma * noise.step).sqrt());
    let at_start = boundary(start);
    Ok(run_escapes(
        noise,
        || (!at_start).then(|| vec![start]),
        |x, rng| {
            let z: f64 = rng.sample(StandardNormal);
            x[0] += drift(x[0]) * dt + amp * z;
            boundary(x[0])
        },
    ))
}

/// Escape from a basin of the replicator flow with isotropic tangent-space
/// noise: each increment is projected onto `Σ dx = 0`, then the state is
/// clamped at zero and renormalized.
pub fn simulate_escape_simplex<B>(
    model: &FitnessModel,
    start: &PopulationState,
    boundary: B,
    noise: &NoiseConfig,
) -> Result<EscapeSamples>
where
    B: Fn(&[f64]) -> bool,
{
    noise.validate()?;
    model.check_dim(start.dim())?;
    let n = start.dim();
    let (dt, amp) = (noise.step, (noise.sigma * noise.step).sqrt());
    let at_start = boundary(start.shares());
    let mut f = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut failure = None;
    let samples = run_escapes(
        noise,
        || (!at_start).then(|| start.shares().to_vec()),
        |x, rng| {
            model.fitness_into(x, &mut f);
            let m: f64 = x.iter().zip(&f).map(|(a, b)| a * b).sum();
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
            }
            let zbar = z.iter().sum::<f64>() / n as f64;
            for j in 0..n {
                x[j] += x[j] * (f[j] - m) * dt + amp * (z[j] - zbar);
                x[j] = x[j].max(0.0);
            }
            if let Err(e) = renormalize_in_place(x, start.threshold()) {
                failure.get_or_insert(e);
                return true;
            }
            boundary(x)
        },
    );
    match failure {
        Some(e) => Err(Error::Numerical(format!("simplex escape failed: {e}"))),
        None => Ok(samples),
    }
}

/// Mean escape times across a σ sweep with the Kramers regression of
/// `ln E[τ]` against `1/σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapeReport {
    pub samples: Vec<EscapeSamples>,
    pub mean_escape_times: Vec<f64>,
    /// Slope of `ln E[τ]` versus `1/σ`: the estimated barrier.
    pub log_fit_slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub barrier_reference: Option<f64>,
    /// `barrier_reference / σ` per noise level.
    pub protection_bits: Option<Vec<f64>>,
}

impl EscapeReport {
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        for (smp, m) in self.samples.iter().zip(&self.mean_escape_times) {
            let _ = writeln!(s, "mean_escape_time[sigma={}] = {m}", smp.sigma);
            let _ = writeln!(s, "censored[sigma={}] = {}", smp.sigma, smp.censored_count());
        }
        let _ = writeln!(s, "log_fit_slope = {}", self.log_fit_slope);
        let _ = writeln!(s, "intercept = {}", self.intercept);
        let _ = writeln!(s, "r_squared = {}", self.r_squared);
        if let Some(b) = self.barrier_reference {
            let _ = writeln!(s, "barrier_reference = {b}");
        }
        s
    }
}

pub fn kramers_scaling<D, B>(
    drift: D,
    start: f64,
    boundary: B,
    sigmas: &[f64],
    base: &NoiseConfig,
    barrier_reference: Option<f64>,
) -> Result<EscapeReport>
where
    D: Fn(f64) -> f64,
    B: Fn(f64) -> bool,
{
    if sigmas.len() < 3 {
        return config(format!("need at least 3 noise levels, got {}", sigmas.len()));
    }
    for (i, a) in sigmas.iter().enumerate() {
        if sigmas[..i].contains(a) {
            return config(format!("noise level {a} repeated"));
        }
    }
    let mut samples = Vec::with_capacity(sigmas.len());
    let mut means = Vec::with_capacity(sigmas.len());
    for &s in sigmas {
        let smp = simulate_escape(&drift, start, &boundary, &base.with_sigma(s))?;
        if 2 * smp.censored_count() > smp.times.len() {
            return Err(Error::Statistical(format!(
                "{} of {} runs censored at sigma = {s}",
                smp.censored_count(),
                smp.times.len()
            )));
        }
        means.push(smp.mean_escape_time().expect("some runs escaped"));
        samples.push(smp);
    }
    let xs: Vec<f64> = sigmas.iter().map(|s| 1.0 / s).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let fit = linear_fit(&xs, &ys);
    let protection_bits = barrier_reference.map(|w| sigmas.iter().map(|s| w / s).collect());
    Ok(EscapeReport {
        samples,
        mean_escape_times: means,
        log_fit_slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        barrier_reference,
        protection_bits,
    })
}

/// CSV with header `sigma,run,escape_time,censored`.
pub fn write_escape_csv<W: Write>(samples: &[EscapeSamples], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "run", "escape_time", "censored"]).map_err(csv_err)?;
    for s in samples {
        for (run, (t, c)) in s.times.iter().zip(&s.censored).enumerate() {
            w.write_record([s.sigma.to_string(), run.to_string(), t.to_string(), c.to_string()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
