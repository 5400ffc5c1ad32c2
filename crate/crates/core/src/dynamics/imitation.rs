use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{config, Result};
use crate::fitness::FitnessModel;
use crate::rng::{stream, Purpose};
use crate::simplex::PopulationState;

/// Sampled path of the finite-population imitation process.
#[derive(Debug, Clone, PartialEq)]
pub struct ImitationRun {
    pub times: Vec<f64>,
    pub frequencies: Vec<Vec<f64>>,
    /// The process reached a state with zero total switching rate.
    pub absorbed: bool,
    pub absorbed_at: Option<f64>,
    pub events: u64,
}

/// Exact-event simulation of pairwise proportional imitation among
/// `population_size` agents.
///
/// An agent of type `k` switches to type `j` at total rate
/// `N x_j x_k (f_j − f_k)_+`, which makes the expected drift of the
/// frequencies equal to the replicator field in unscaled time. Frequencies
/// are recorded every `sample_dt` up to `horizon`.
pub fn simulate_imitation(
    model: &FitnessModel,
    population_size: usize,
    initial: &PopulationState,
    horizon: f64,
    sample_dt: f64,
    seed: u64,
) -> Result<ImitationRun> {
    if population_size < 2 {
        return config(format!("population size must be at least 2, got {population_size}"));
    }
    if !(sample_dt > 0.0) || !(horizon >= 0.0) {
        return config("sample interval must be positive and horizon nonnegative");
    }
    model.check_dim(initial.dim())?;
    let n = initial.dim();
    let big_n = population_size as f64;
    let mut counts = apportion(initial.shares(), population_size);
    let mut rng = stream(seed, Purpose::Imitation, 0);

    let n_samples = (horizon / sample_dt + 1e-9).floor() as usize + 1;
    let mut run = ImitationRun {
        times: Vec::with_capacity(n_samples),
        frequencies: Vec::with_capacity(n_samples),
        absorbed: false,
        absorbed_at: None,
        events: 0,
    };
    let mut x = vec![0.0; n];
    let mut f = vec![0.0; n];
    let mut pair_rates: Vec<(usize, usize, f64)> = Vec::with_capacity(n * n);
    let mut t = 0.0;
    let mut next_sample = 0usize;

    loop {
        for j in 0..n {
            x[j] = counts[j] as f64 / big_n;
        }
        model.fitness_into(&x, &mut f);
        pair_rates.clear();
        let mut total = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k && counts[k] > 0 && counts[j] > 0 && f[j] > f[k] {
                    let r = big_n * x[j] * x[k] * (f[j] - f[k]);
                    total += r;
                    pair_rates.push((j, k, r));
                }
            }
        }
        let t_next = if total > 0.0 {
            t + Exp::new(total).expect("positive rate").sample(&mut rng)
        } else {
            f64::INFINITY
        };
        while next_sample < n_samples && (next_sample as f64) * sample_dt < t_next {
            run.times.push(next_sample as f64 * sample_dt);
            run.frequencies.push(x.clone());
            next_sample += 1;
        }
        if total <= 0.0 {
            run.absorbed = true;
            run.absorbed_at = Some(t);
            break;
        }
        if next_sample >= n_samples {
            break;
        }
        t = t_next;
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = pair_rates[pair_rates.len() - 1];
        for &pr in &pair_rates {
            if u < pr.2 {
                chosen = pr;
                break;
            }
            u -= pr.2;
        }
        let (j, k, _) = chosen;
        counts[k] -= 1;
        counts[j] += 1;
        run.events += 1;
    }
    Ok(run)
}

/// Largest-remainder rounding of `shares · total` to integer counts.
fn apportion(shares: &[f64], total: usize) -> Vec<usize> {
    let raw: Vec<f64> = shares.iter().map(|s| s * total as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = raw[a] - raw[a].floor();
        let rb = raw[b] - raw[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_single_agent() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        assert!(simulate_imitation(&m, 1, &s, 1.0, 0.1, 0).is_err());
    }

    #[test]
    fn monomorphic_start_is_absorbing() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::vertex(2, 1).unwrap();
        let r = simulate_imitation(&m, 100, &s, 5.0, 0.5, 3).unwrap();
        assert!(r.absorbed);
        assert_eq!(r.absorbed_at, Some(0.0));
        assert_eq!(r.events, 0);
        assert_eq!(r.frequencies.len(), 11);
        assert!(r.frequencies.iter().all(|f| f == &vec![0.0, 1.0]));
    }

    #[test]
    fn deterministic_per_seed() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::new(vec![0.5, 0.5]).unwrap();
        let a = simulate_imitation(&m, 200, &s, 3.0, 0.1, 11).unwrap();
        let b = simulate_imitation(&m, 200, &s, 3.0, 0.1, 11).unwrap();
        let c = simulate_imitation(&m, 200, &s, 3.0, 0.1, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn apportion_sums() {
        assert_eq!(apportion(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 10).iter().sum::<usize>(), 10);
        assert_eq!(apportion(&[0.5, 0.5], 400), vec![200, 200]);
    }
}
