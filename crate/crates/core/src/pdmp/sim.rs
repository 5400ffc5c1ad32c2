use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::Deserialize;

use crate::dynamics::csv_err;
use crate::error::{config, validation, Result};
use crate::ode::Rk4;
use crate::rng::{stream, Purpose};
use crate::simplex::renormalize_in_place;

const BISECT_TOL: f64 = 1e-10;
const MONOTONE_SLACK: f64 = 1e-12;

/// `f(x) = base + Σⱼ weights[j]·x_j`, indexed by global strategy id; ids
/// past the end of `weights` and inactive strategies contribute nothing.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearFitness {
    pub base: f64,
    #[serde(default)]
    pub weights: Vec<f64>,
}

impl LinearFitness {
    pub fn new(base: f64, weights: Vec<f64>) -> Self {
        LinearFitness { base, weights }
    }

    fn eval(&self, active: &[usize], x: &[f64]) -> f64 {
        self.base + active.iter().zip(x).map(|(&j, &xj)| self.weights.get(j).copied().unwrap_or(0.0) * xj).sum::<f64>()
    }
}

/// Strategies `0..initial_shares.len()` start active; the rest form the
/// innovation pool and enter in order.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdmpConfig {
    pub innovation_rate: f64,
    pub entry_mass: f64,
    pub extinction_threshold: f64,
    pub foster_c: f64,
    pub strategies: Vec<LinearFitness>,
    pub initial_shares: Vec<f64>,
    pub horizon: f64,
    pub seed: u64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_sample")]
    pub sample_interval: f64,
}

fn default_step() -> f64 {
    0.01
}

fn default_sample() -> f64 {
    0.1
}

impl PdmpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.innovation_rate >= 0.0 && self.innovation_rate.is_finite()) {
            return validation(format!("innovation rate must be >= 0, got {}", self.innovation_rate));
        }
        if !(self.entry_mass > 0.0 && self.entry_mass < 1.0) {
            return validation(format!("entry mass must lie in (0, 1), got {}", self.entry_mass));
        }
        if !(self.extinction_threshold > 0.0 && self.extinction_threshold < self.entry_mass) {
            return validation("extinction threshold must lie in (0, entry mass)");
        }
        if !(self.foster_c > 0.0) {
            return validation(format!("foster constant must be > 0, got {}", self.foster_c));
        }
        let n0 = self.initial_shares.len();
        if n0 == 0 || n0 > self.strategies.len() {
            return validation("initial active set must be nonempty and covered by the strategy list");
        }
        let sum: f64 = self.initial_shares.iter().sum();
        if self.initial_shares.iter().any(|&s| !(s > self.extinction_threshold)) || (sum - 1.0).abs() > 1e-9 {
            return validation("initial shares must lie on the simplex and above the extinction threshold");
        }
        if !(self.horizon > 0.0) || !(self.step > 0.0) || !(self.sample_interval > 0.0) {
            return config("horizon, step and sample interval must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Innovation(usize),
    Extinction(usize),
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::Innovation(_) => "innovation",
            EventKind::Extinction(_) => "extinction",
        }
    }

    pub fn strategy(&self) -> usize {
        match *self {
            EventKind::Innovation(i) | EventKind::Extinction(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdmpEvent {
    pub time: f64,
    pub kind: EventKind,
    pub pre_active: Vec<usize>,
    pub pre_state: Vec<f64>,
    pub post_active: Vec<usize>,
    pub post_state: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdmpSample {
    pub time: f64,
    pub active: Vec<usize>,
    pub shares: Vec<f64>,
    pub mean_fitness: f64,
    pub foster: f64,
}

/// A stretch of pure replicator flow between two events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    /// Mean fitness never dropped (beyond 1e-12) along the segment.
    pub mean_fitness_monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdmpReport {
    pub events: Vec<PdmpEvent>,
    pub samples: Vec<PdmpSample>,
    pub segments: Vec<Segment>,
    /// The clock fired with no strategies left to enter; later innovations
    /// were dropped.
    pub pool_exhausted: bool,
    pub final_time: f64,
    pub final_active: Vec<usize>,
    pub final_shares: Vec<f64>,
}

impl PdmpReport {
    pub fn active_set_sizes(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.active.len()).collect()
    }
}

/// `−f̄ + c·|S|`.
pub fn foster_lyapunov(mean_fitness: f64, active_set_size: usize, c: f64) -> f64 {
    -mean_fitness + c * active_set_size as f64
}

/// Pool of `n` strategies with bases uniform in `base ± base_spread` and
/// interaction weights uniform in `±interaction`, drawn from the pool stream
/// of `seed`.
pub fn random_linear_pool(n: usize, seed: u64, base: f64, base_spread: f64, interaction: f64) -> Vec<LinearFitness> {
    let mut rng = stream(seed, Purpose::Pool, 0);
    (0..n)
        .map(|_| {
            let b = base + base_spread * (2.0 * rng.gen::<f64>() - 1.0);
            let w = (0..n).map(|_| interaction * (2.0 * rng.gen::<f64>() - 1.0)).collect();
            LinearFitness::new(b, w)
        })
        .collect()
}

struct Flow<'a> {
    pool: &'a [LinearFitness],
    active: Vec<usize>,
    rk: Rk4,
    f: Vec<f64>,
}

impl<'a> Flow<'a> {
    fn new(pool: &'a [LinearFitness], active: Vec<usize>) -> Self {
        let n = active.len();
        Flow { pool, active, rk: Rk4::new(n), f: vec![0.0; n] }
    }

    fn reset(&mut self, active: Vec<usize>) {
        let n = active.len();
        self.active = active;
        self.rk = Rk4::new(n);
        self.f = vec![0.0; n];
    }

    fn mean_fitness(&self, x: &[f64]) -> f64 {
        self.active.iter().zip(x).map(|(&i, &xi)| xi * self.pool[i].eval(&self.active, x)).sum()
    }

    fn step(&mut self, x: &mut [f64], h: f64) -> Result<()> {
        let pool = self.pool;
        let active = &self.active;
        let f = &mut self.f;
        let mut field = |_t: f64, y: &[f64], dy: &mut [f64]| {
            for (k, &i) in active.iter().enumerate() {
                f[k] = pool[i].eval(active, y);
            }
            let m: f64 = y.iter().zip(f.iter()).map(|(a, b)| a * b).sum();
            for k in 0..y.len() {
                dy[k] = y[k] * (f[k] - m);
            }
        };
        self.rk.step(&mut field, 0.0, x, h);
        renormalize_in_place(x, 0.0)
    }
}

/// Simulates one sample path. Deterministic for a given config and seed.
pub fn pdmp_simulate(cfg: &PdmpConfig) -> Result<PdmpReport> {
    cfg.validate()?;
    let eps = cfg.extinction_threshold;
    let mut rng = stream(cfg.seed, Purpose::Innovation, 0);
    let clock = (cfg.innovation_rate > 0.0).then(|| Exp::new(cfg.innovation_rate).expect("positive rate"));
    let draw = |t: f64, rng: &mut rand_chacha::ChaCha8Rng| clock.as_ref().map_or(f64::INFINITY, |c| t + c.sample(rng));

    let mut next_entrant = cfg.initial_shares.len();
    let mut flow = Flow::new(&cfg.strategies, (0..next_entrant).collect());
    let mut x = cfg.initial_shares.clone();
    renormalize_in_place(&mut x, 0.0)?;

    let mut t = 0.0;
    let mut next_innovation = draw(0.0, &mut rng);
    let mut sample_k = 0usize;
    let mut events = Vec::new();
    let mut samples = Vec::new();
    let mut segments = Vec::new();
    let mut pool_exhausted = false;
    let mut seg = Segment { start: 0.0, end: 0.0, mean_fitness_monotone: true };
    let mut fbar = flow.mean_fitness(&x);

    let sample = |t: f64, flow: &Flow, x: &[f64]| {
        let m = flow.mean_fitness(x);
        PdmpSample {
            time: t,
            active: flow.active.clone(),
            shares: x.to_vec(),
            mean_fitness: m,
            foster: foster_lyapunov(m, flow.active.len(), cfg.foster_c),
        }
    };
    samples.push(sample(0.0, &flow, &x));
    sample_k += 1;

    while t < cfg.horizon {
        let next_sample = sample_k as f64 * cfg.sample_interval;
        let target = cfg.horizon.min(next_innovation).min(next_sample);
        let (h, lands) = if target - t <= cfg.step { (target - t, true) } else { (cfg.step, false) };
        let before = x.clone();
        flow.step(&mut x, h)?;

        let crossed: Vec<usize> = (0..x.len()).filter(|&k| before[k] >= eps && x[k] < eps).collect();
        if !crossed.is_empty() && x.len() > 1 {
            // locate the first crossing inside the step
            let (mut lo, mut hi) = (0.0, h);
            let mut at_hi = x.clone();
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                let mut y = before.clone();
                flow.step(&mut y, mid)?;
                if crossed.iter().any(|&k| y[k] < eps) {
                    hi = mid;
                    at_hi = y;
                } else {
                    lo = mid;
                }
            }
            t += hi;
            seg.mean_fitness_monotone &= flow.mean_fitness(&at_hi) >= fbar - MONOTONE_SLACK;
            seg.end = t;
            segments.push(seg);
            let pre_active = flow.active.clone();
            let keep: Vec<usize> = (0..at_hi.len()).filter(|&k| at_hi[k] >= eps).collect();
            let mut post: Vec<f64> = keep.iter().map(|&k| at_hi[k]).collect();
            renormalize_in_place(&mut post, 0.0)?;
            let post_active: Vec<usize> = keep.iter().map(|&k| pre_active[k]).collect();
            for k in (0..at_hi.len()).filter(|&k| at_hi[k] < eps) {
                events.push(PdmpEvent {
                    time: t,
                    kind: EventKind::Extinction(pre_active[k]),
                    pre_active: pre_active.clone(),
                    pre_state: at_hi.clone(),
                    post_active: post_active.clone(),
                    post_state: post.clone(),
                });
            }
            flow.reset(post_active);
            x = post;
            fbar = flow.mean_fitness(&x);
            seg = Segment { start: t, end: t, mean_fitness_monotone: true };
            continue;
        }

        t = if lands { target } else { t + h };
        let f_now = flow.mean_fitness(&x);
        seg.mean_fitness_monotone &= f_now >= fbar - MONOTONE_SLACK;
        fbar = f_now;
        if lands && target == next_sample {
            samples.push(sample(t, &flow, &x));
            sample_k += 1;
        }
        if lands && target == next_innovation {
            next_innovation = draw(t, &mut rng);
            if next_entrant >= cfg.strategies.len() {
                pool_exhausted = true;
                continue;
            }
            seg.end = t;
            segments.push(seg);
            let pre_active = flow.active.clone();
            let pre_state = x.clone();
            let mut post_active = pre_active.clone();
            post_active.push(next_entrant);
            let mut post: Vec<f64> = x.iter().map(|v| v * (1.0 - cfg.entry_mass)).collect();
            post.push(cfg.entry_mass);
            events.push(PdmpEvent {
                time: t,
                kind: EventKind::Innovation(next_entrant),
                pre_active,
                pre_state,
                post_active: post_active.clone(),
                post_state: post.clone(),
            });
            next_entrant += 1;
            flow.reset(post_active);
            x = post;
            fbar = flow.mean_fitness(&x);
            seg = Segment { start: t, end: t, mean_fitness_monotone: true };
        }
    }
    seg.end = t;
    segments.push(seg);
    Ok(PdmpReport {
        events,
        samples,
        segments,
        pool_exhausted,
        final_time: t,
        final_active: flow.active.clone(),
        final_shares: x,
    })
}

/// `time,kind,strategy,shares_post...` with post-event shares listed as
/// `id:share` pairs, since the active set changes from row to row.
pub fn write_events_csv<W: Write>(report: &PdmpReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["time", "kind", "strategy", "shares_post"]).map_err(csv_err)?;
    for e in &report.events {
        let mut rec = vec![e.time.to_string(), e.kind.label().to_string(), e.kind.strategy().to_string()];
        rec.extend(e.post_active.iter().zip(&e.post_state).map(|(i, s)| format!("{i}:{s}")));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per sample: `t,x_0..x_{n-1},mean_fitness,active_set_size,foster_value`
/// over every strategy that was ever active (inactive shares are 0).
pub fn write_trajectory_csv<W: Write>(report: &PdmpReport, out: W) -> Result<()> {
    let n = report.samples.iter().flat_map(|s| s.active.iter().copied()).max().map_or(0, |m| m + 1);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|i| format!("x_{i}")));
    header.extend(["mean_fitness", "active_set_size", "foster_value"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for s in &report.samples {
        let mut full = vec![0.0; n];
        for (&i, &v) in s.active.iter().zip(&s.shares) {
            full[i] = v;
        }
        let mut rec = vec![s.time.to_string()];
        rec.extend(full.iter().map(|v| v.to_string()));
        rec.push(s.mean_fitness.to_string());
        rec.push(s.active.len().to_string());
        rec.push(s.foster.to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
