//! Strategies and invariant checks shared by the property suite and the
//! acceptance run. Oracles are independent re-derivations (full vertex
//! enumeration, eigenvalues, replayed tallies).
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use tse_core::dynamics::{detect_domination, integrate_replicator, integrate_replicator_sampled, simulate_imitation};
use tse_core::frontier::{optimize_portfolio, AgentTypeSpec};
use tse_core::market::{
    fork_analysis, iterate_s_curve, spawn_manipulation_search, tipping_index, winner, VotingProfile, VotingRule,
};
use tse_core::pdmp::{pdmp_simulate, random_linear_pool, EventKind, PdmpConfig};
use tse_core::stack::{gershgorin_bound, spectral_radius};
use tse_core::{FitnessModel, Matrix, PopulationState};

pub type Check = Result<(), TestCaseError>;

pub fn square(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(lo..hi, n * n).prop_map(move |v| Matrix::from_row_slice(n, n, &v))
}

pub fn simplex_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    })
}

pub fn game(max_n: usize) -> impl Strategy<Value = (Matrix, Vec<f64>)> {
    (2..=max_n).prop_flat_map(|n| (square(n, -2.0, 2.0), simplex_point(n)))
}

pub fn replicator_stays_on_simplex((a, x0): (Matrix, Vec<f64>)) -> Check {
    let m = FitnessModel::linear(a).unwrap();
    let tr = integrate_replicator(&PopulationState::new(x0).unwrap(), &m, 20.0, 0.01).unwrap();
    for st in &tr.states {
        let x = st.shares();
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
    Ok(())
}

/// Symmetrized payoffs are potential games: f̄ must never drop.
pub fn potential_game_climbs((a, x0): (Matrix, Vec<f64>)) -> Check {
    let sym = (&a + a.transpose()) * 0.5;
    let m = FitnessModel::linear(sym.clone()).unwrap();
    let tr = integrate_replicator(&PopulationState::new(x0).unwrap(), &m, 30.0, 0.01).unwrap();
    let fbar = |x: &[f64]| {
        let v = DVector::from_column_slice(x);
        (v.transpose() * &sym * &v)[(0, 0)]
    };
    for w in tr.states.windows(2) {
        prop_assert!(fbar(w[1].shares()) >= fbar(w[0].shares()) - 1e-9);
    }
    Ok(())
}

/// Payoff matrix, mixture over the other rows, margin δ.
pub fn dominated_game() -> impl Strategy<Value = (Matrix, Vec<f64>, f64)> {
    (3usize..=4).prop_flat_map(|n| (square(n, -1.0, 1.0), simplex_point(n - 1), 0.1f64..0.5))
}

/// Row 0 is a mixture of the other rows minus δ, hence uniformly dominated.
pub fn dominated_type_dies_out((mut a, mix, delta): (Matrix, Vec<f64>, f64)) -> Check {
    let n = a.nrows();
    for j in 0..n {
        a[(0, j)] = (1..n).map(|k| mix[k - 1] * a[(k, j)]).sum::<f64>() - delta;
    }
    let m = FitnessModel::linear(a).unwrap();
    prop_assert!(detect_domination(&m, 0, 50).unwrap().dominated);
    let tr = integrate_replicator_sampled(&PopulationState::uniform(n).unwrap(), &m, 200.0, 0.01, 1000).unwrap();
    prop_assert!(tr.final_state().shares()[0] < 1e-6);
    Ok(())
}

/// Every vertex of `{n ≥ 0, c·n ≤ B, ℓ·n ≤ Q}` solves some `n` tight
/// constraints out of `n + 2`; enumerate all of them.
pub fn brute_force_lp(types: &[AgentTypeSpec], budget: f64, capacity: f64) -> f64 {
    let n = types.len();
    let mut rows: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            (e, 0.0)
        })
        .collect();
    rows.push((types.iter().map(|t| t.cost).collect(), budget));
    rows.push((types.iter().map(|t| t.load).collect(), capacity));
    let total = rows.len();
    let used = |k: usize, x: &DVector<f64>| rows[k].0.iter().zip(x.iter()).map(|(c, v)| c * v).sum::<f64>();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<usize> = (0..total).filter(|i| mask >> i & 1 == 1).collect();
        let a = DMatrix::from_fn(n, n, |r, c| rows[chosen[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| rows[chosen[r]].1);
        let Some(x) = a.lu().solve(&b) else { continue };
        if x.iter().all(|&v| v >= -1e-9) && used(n, &x) <= budget * (1.0 + 1e-9) && used(n + 1, &x) <= capacity * (1.0 + 1e-9)
        {
            best = best.max(types.iter().zip(x.iter()).map(|(t, v)| t.return_rate * v).sum());
        }
    }
    best
}

pub fn lp_instance() -> impl Strategy<Value = (Vec<AgentTypeSpec>, f64, f64)> {
    let types = prop::collection::vec((0.0f64..5.0, 0.1f64..3.0, 0.1f64..3.0), 1..=6)
        .prop_map(|v| v.into_iter().map(|(r, c, l)| AgentTypeSpec::new(r, c, l).unwrap()).collect());
    (types, 0.5f64..20.0, 0.5f64..20.0)
}

pub fn lp_matches_brute_force((types, budget, capacity): (Vec<AgentTypeSpec>, f64, f64)) -> Check {
    let sol = optimize_portfolio(&types, budget, capacity).unwrap();
    let oracle = brute_force_lp(&types, budget, capacity);
    let tol = 1e-9 * oracle.max(1.0);
    prop_assert!((sol.total_return - oracle).abs() <= tol, "solver {} vs brute force {}", sol.total_return, oracle);
    let dual = sol.budget_price * budget + sol.capacity_price * capacity;
    prop_assert!((dual - sol.total_return).abs() <= tol, "dual {dual} vs primal {}", sol.total_return);
    Ok(())
}

pub fn gain_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=6).prop_flat_map(|n| square(n, 0.0, 1.0))
}

pub fn spectral_radius_under_gershgorin(m: Matrix) -> Check {
    let rho = spectral_radius(&m).unwrap();
    prop_assert!(rho <= gershgorin_bound(&m) + 1e-12);
    let oracle = m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
    prop_assert!((rho - oracle).abs() <= 1e-8 * oracle.max(1.0), "{rho} vs eigen {oracle}");
    Ok(())
}

pub fn voting_profile() -> impl Strategy<Value = VotingProfile> {
    (3usize..=4, 2usize..=7).prop_flat_map(|(m, n)| {
        let ballot = Just((0..m).collect::<Vec<usize>>()).prop_shuffle();
        prop::collection::vec(ballot, n).prop_map(move |bs| {
            let labels = (0..m).map(|i| char::from(b'a' + i as u8).to_string()).collect();
            VotingProfile::from_indices(labels, bs).unwrap()
        })
    })
}

/// Replays every certificate on a profile with the spawned ballots appended.
pub fn manipulation_replays(p: VotingProfile) -> Check {
    for rule in VotingRule::ALL {
        let r = spawn_manipulation_search(rule, &p, None);
        prop_assert_eq!(r.old_winner, winner(rule, &p));
        if !r.found {
            continue;
        }
        let ballot = r.ballot.clone().unwrap();
        let mut ballots = p.ballots().to_vec();
        ballots.extend(std::iter::repeat(ballot.clone()).take(r.k));
        let spawned = VotingProfile::from_indices(p.alternatives().to_vec(), ballots).unwrap();
        prop_assert_eq!(winner(rule, &spawned), r.new_winner);
        let pos = |a: usize| ballot.iter().position(|&x| x == a).unwrap();
        prop_assert!(pos(r.new_winner) < pos(r.old_winner));
    }
    Ok(())
}

/// `|T| > 1` iff the S-curve midpoint repels (its slope there is `T`).
pub fn tipping_matches_s_curve((slope, rho, eps): (f64, f64, f64)) -> Check {
    prop_assume!(rho * slope < 0.95);
    let t = tipping_index(slope, rho).unwrap();
    prop_assume!((t - 1.0).abs() > 0.05);
    let path = iterate_s_curve(0.5 + eps, 4.0 * t, 3).unwrap();
    if t > 1.0 {
        prop_assert!(path.windows(2).all(|w| w[1] > w[0]));
    } else {
        prop_assert!(path.windows(2).all(|w| (w[1] - 0.5).abs() < (w[0] - 0.5).abs()));
    }
    Ok(())
}

pub fn fork_monotone((losses, c1, c2): (Vec<f64>, f64, f64)) -> Check {
    let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
    let a = fork_analysis(&losses, lo, 1.0, [12.0, 9.0], [15.0, 14.0]).unwrap();
    let b = fork_analysis(&losses, hi, 1.0, [12.0, 9.0], [15.0, 14.0]).unwrap();
    prop_assert!(!b.fork_viable || a.fork_viable);
    Ok(())
}

pub fn pdmp_config() -> impl Strategy<Value = PdmpConfig> {
    (any::<u64>(), 2usize..=4, 0.05f64..0.5, 0.02f64..0.1).prop_map(|(seed, k, rate, eps)| PdmpConfig {
        innovation_rate: rate,
        entry_mass: eps,
        extinction_threshold: 0.01,
        foster_c: 0.2,
        strategies: random_linear_pool(k + 6, seed, 1.0, 0.1, 0.5),
        initial_shares: vec![1.0 / k as f64; k],
        horizon: 40.0,
        seed,
        step: 0.01,
        sample_interval: 0.5,
    })
}

pub fn pdmp_conserves_mass_and_replays(cfg: PdmpConfig) -> Check {
    let a = pdmp_simulate(&cfg).unwrap();
    for e in &a.events {
        prop_assert!((e.post_state.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        if let EventKind::Innovation(id) = e.kind {
            let i = e.post_active.iter().position(|&s| s == id).unwrap();
            prop_assert!((e.post_state[i] - cfg.entry_mass).abs() <= 1e-15);
        }
    }
    for s in &a.samples {
        prop_assert!((s.shares.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
    prop_assert_eq!(a.events, pdmp_simulate(&cfg).unwrap().events);
    Ok(())
}

/// RMS over replicates of the sup-norm gap between the imitation process
/// and the replicator path on hawk–dove.
pub fn imitation_deviation(n: usize, replicates: u64) -> f64 {
    let m = FitnessModel::from_rows(&[vec![-1.0, 2.0], vec![0.0, 1.0]]).unwrap();
    let x0 = PopulationState::new(vec![0.2, 0.8]).unwrap();
    let ode = integrate_replicator_sampled(&x0, &m, 8.0, 0.01, 10).unwrap();
    let mut sq = 0.0;
    for r in 0..replicates {
        let run = simulate_imitation(&m, n, &x0, 8.0, 0.1, 1000 + r).unwrap();
        let gap = run
            .frequencies
            .iter()
            .zip(&ode.states)
            .map(|(f, s)| (f[0] - s.shares()[0]).abs())
            .fold(0.0, f64::max);
        sq += gap * gap;
    }
    (sq / replicates as f64).sqrt()
}

/// Deviation ratio between populations `n` and `4n`; ≈ 2 by the `1/√N` law.
pub fn kurtz_factor(n: usize, replicates: u64) -> f64 {
    imitation_deviation(n, replicates) / imitation_deviation(4 * n, replicates)
}
