//! Acceptance run: one PASS/FAIL line per criterion, each with its runtime
//! budget. Exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tse_core::frontier::{normalize_types, optimal_unit_mix, roc_frontier, AgentTypeSpec};
use tse_core::hopf::{first_lyapunov_coefficient, hopf_curve, sweep};
use tse_core::market::{
    beta_crit, default_steepness, governance_thresholds, grim_trigger_threshold, hamilton_invade, iterate_s_curve,
    lineage_shadow, myopic_slope, spawn_adjusted_slope, tipping_index, umpire_game, GovernanceParams, ShadowParams,
    TippingParams,
};
use tse_core::pdmp::{pdmp_simulate, random_linear_pool, stationary_active_set, EventKind, LinearFitness, PdmpConfig};
use tse_core::stack::{analyze_stack, safe_depth_uniform, slack_budget, LevelStack};
use tse_core::stochastic::{kramers_scaling, protection_bits, DoubleWell, NoiseConfig};
use tse_core::Matrix;

type Outcome = Result<String, String>;

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name} = {got}, expected {want} ± {tol}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn barbell_frontier() -> Outcome {
    let types = [
        AgentTypeSpec::new(1.0, 1.0, 1.0).map_err(e)?,
        AgentTypeSpec::new(2.4, 2.0, 1.8).map_err(e)?,
        AgentTypeSpec::new(8.0, 5.0, 4.0).map_err(e)?,
    ];
    let pts = normalize_types(&types).map_err(e)?;
    for (p, (a, b)) in pts.iter().zip([(1.0, 1.0), (0.9, 1.2), (0.8, 1.6)]) {
        close("a", p.load_per_cost, a, 1e-12)?;
        close("b", p.return_per_cost, b, 1e-12)?;
    }
    let f = roc_frontier(&pts);
    ensure(f.dominated == vec![1], || format!("dominated set {:?}, expected [G]", f.dominated))?;
    let mix = optimal_unit_mix(&types, 3.0).map_err(e)?;
    close("alpha_P", mix[2], 2.0 / 3.0, 1e-9)?;
    Ok(format!("G dominated, alpha_P = {:.9}", mix[2]))
}

fn two_level_stack() -> Outcome {
    let beta = Matrix::from_row_slice(2, 2, &[0.0, 0.1, 0.15, 0.0]);
    let a = analyze_stack(&LevelStack::from_parts(&[0.3, 0.2], beta).map_err(e)?).map_err(e)?;
    let g = &a.gain_matrix;
    close("Gamma_01", g[(0, 1)], 0.1429, 1e-4)?;
    close("Gamma_10", g[(1, 0)], 0.1875, 1e-4)?;
    close("rho", a.spectral_radius, 0.1637, 1e-3)?;
    let v = a.weights.as_ref().ok_or("no weights")?.v.clone();
    // independent residual of (I − Γᵀ) v = 1
    let lhs = (DMatrix::identity(2, 2) - g.transpose()) * DVector::from_vec(v);
    let residual = lhs.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    ensure(residual <= 1e-10, || format!("weight residual {residual}"))?;
    Ok(format!("rho = {:.4}, residual = {residual:.1e}", a.spectral_radius))
}

fn slack_budget_example() -> Outcome {
    let b = slack_budget(&[0.05, 0.08, 0.06, 0.04, 0.10, 0.07], 0.5, 0.1).map_err(e)?;
    close("total cost", b.total, 0.4154, 1e-3)?;
    close("B", b.budget, 1.609, 1e-3)?;
    close("remaining slack", b.remaining_slack, 0.330, 5e-3)?;
    ensure(b.safe, || "verdict not safe".into())?;
    let depth = safe_depth_uniform(0.07, 0.5, 0.1).map_err(e)?;
    ensure(depth == 22, || format!("uniform depth {depth}, expected 22"))?;
    Ok(format!("total {:.4}, B {:.4}, slack {:.4}, depth {depth}", b.total, b.budget, b.remaining_slack))
}

fn act_chain() -> Outcome {
    let p = TippingParams::new(0.3, 0.6, 0.8, 0.2, 1.5).map_err(e)?;
    let s = myopic_slope(&p);
    close("S_myo", s, 1.125, 1e-12)?;
    let t = tipping_index(s, p.rho_discount).map_err(e)?;
    close("T", t, 1.452, 1e-3)?;
    close("beta_crit", beta_crit(0.8, 0.2, 0.3, None).map_err(e)?, 0.3667, 1e-3)?;
    let ts = tipping_index(spawn_adjusted_slope(&p), p.rho_discount).map_err(e)?;
    close("spawn T", ts, 4.58, 0.01)?;
    let shadow = ShadowParams::new(0.3, 0.5, 1.0).map_err(e)?;
    close("gamma(5)", lineage_shadow(5.0, &shadow).map_err(e)?, 0.4, 1e-12)?;
    close("p", protection_bits(0.8, 0.05).map_err(e)?, 16.0, 1e-9)?;
    close("delta*", grim_trigger_threshold(3.0, 2.0, 1.0).map_err(e)?, 0.5, 1e-12)?;
    close("neutral beta_crit", beta_crit(0.8, 0.2, 0.0, None).map_err(e)?, 0.6667, 1e-3)?;
    let path = iterate_s_curve(0.55, default_steepness(t), 5).map_err(e)?;
    let last = *path.last().unwrap();
    ensure(path.iter().any(|&m| m >= 0.9), || {
        format!("S-curve from 0.55 reaches only {last:.4} after 5 steps (needs >= 0.9); all closed forms match")
    })?;
    Ok(format!("T = {t:.4}, spawn T = {ts:.3}, S-curve {last:.3}"))
}

fn governance_formulas() -> Outcome {
    let g = governance_thresholds(&GovernanceParams {
        delta_h: 10.0,
        delta_ai: 5.0,
        epsilon_influence: 0.3,
        lambda_env: 0.35,
        cost_capture: 10.0,
        cost_maladapt: 1.0,
    })
    .map_err(e)?;
    close("coalition_min", g.coalition_min_weight, 0.15, 1e-12)?;
    close("symbiosis_min", g.symbiosis_min_weight, 0.1304, 1e-3)?;
    close("entrenchment bits", g.optimal_bits, 6.58, 0.05)?;
    close("bits(1.2)", protection_bits(1.2, 0.1).map_err(e)?, 12.0, 1e-9)?;
    close("bits(2.5)", protection_bits(2.5, 0.1).map_err(e)?, 25.0, 1e-9)?;
    Ok(format!("symbiosis {:.4}, bits {:.3}", g.symbiosis_min_weight, g.optimal_bits))
}

fn umpire() -> Outcome {
    let u = umpire_game(5, 10.0, 100.0).map_err(e)?;
    ensure(u.g_nash == 25.0 && u.u_nash == 145.0, || format!("Nash ({}, {})", u.g_nash, u.u_nash))?;
    close("G_social", u.g_social, 500.0, 1e-9)?;
    close("U_social", u.u_social, 223.6, 0.1)?;
    close("efficiency loss", u.efficiency_loss, 0.35, 0.01)?;
    Ok(format!("U_social = {:.2}, loss = {:.3}", u.u_social, u.efficiency_loss))
}

fn hamilton() -> Outcome {
    let got: Vec<bool> = [0.1, 0.5, 1.0].iter().map(|&r| hamilton_invade(r, 0.40, 0.15)).collect();
    ensure(got == [false, true, true], || format!("invade = {got:?}"))?;
    Ok(format!("invade = {got:?}"))
}

// 50-digit evaluations of the closed forms, computed independently.
const HOPF_FROZEN: [(f64, f64, f64); 4] = [
    (0.05, 0.494288510381171370331893, -0.2039117986750063295704057),
    (0.1, 0.4900199203977733560654839, -0.1871042539040453866464834),
    (0.2, 0.4900592906217655114669617, -0.1353164693413185385568317),
    (0.3, 0.5318228486535704964000861, -0.0441849695808387064675369),
];

fn hopf_lab() -> Outcome {
    for (mu, kc, l1) in HOPF_FROZEN {
        close(&format!("kappa_c({mu})"), hopf_curve(mu).map_err(e)?, kc, 1e-12)?;
        let l = first_lyapunov_coefficient(mu).map_err(e)?;
        close(&format!("l1({mu})"), l, l1, 1e-12)?;
        ensure(l < 0.0, || format!("l1({mu}) = {l} not negative"))?;
    }
    let kc = hopf_curve(0.2).map_err(e)?;
    let offsets = [0.005, 0.01, 0.02, 0.04];
    let kappas: Vec<f64> = offsets.iter().map(|o| kc - o).collect();
    let rows = sweep(0.2, &kappas, 4000.0, 3200.0, 0.05).map_err(e)?;
    let xs: Vec<f64> = offsets.iter().map(|o| o.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.amplitude_measured.ln()).collect();
    let slope = tse_core::stats::linear_fit(&xs, &ys).slope;
    close("amplitude exponent", slope, 0.5, 0.1)?;
    Ok(format!("amplitude exponent {slope:.4}"))
}

fn kramers() -> Outcome {
    let w = DoubleWell::symmetric(0.25);
    let noise = NoiseConfig::new(0.1, 2024, 0.01, 200).map_err(e)?;
    let r = kramers_scaling(|x| w.drift(x), -1.0, |x| x >= 0.0, &[0.05, 0.08, 0.125], &noise, Some(0.25))
        .map_err(e)?;
    let s = r.log_fit_slope;
    ensure((0.175..=0.325).contains(&s), || format!("slope {s} outside [0.175, 0.325]"))?;
    Ok(format!("slope {s:.4}"))
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> common::Check,
) -> Result<(), String> {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, rng);
    runner.run(&strategy, check).map_err(|err| format!("{name}: {err}"))
}

fn property_suites() -> Outcome {
    use common::*;
    use proptest::prelude::*;
    run_property("simplex preservation", 64, game(5), replicator_stays_on_simplex)?;
    run_property("potential-game monotonicity", 64, game(5), potential_game_climbs)?;
    run_property("dominated elimination", 64, dominated_game(), dominated_type_dies_out)?;
    run_property("LP vs brute force", 200, lp_instance(), lp_matches_brute_force)?;
    run_property("Gershgorin bound", 200, gain_matrix(), spectral_radius_under_gershgorin)?;
    run_property("manipulation replay", 100, voting_profile(), manipulation_replays)?;
    run_property("PDMP mass and determinism", 50, pdmp_config(), pdmp_conserves_mass_and_replays)?;
    run_property(
        "tipping vs S-curve",
        100,
        (0.05f64..3.0, 0.0f64..0.3, 0.001f64..0.02),
        tipping_matches_s_curve,
    )?;
    run_property(
        "fork monotonicity",
        100,
        (prop::collection::vec(0.1f64..5.0, 1..4), 0.0f64..20.0, 0.0f64..20.0),
        fork_monotone,
    )?;
    let k = kurtz_factor(400, 60);
    ensure((1.4..=2.8).contains(&k), || format!("N-scaling factor {k}"))?;
    Ok(format!("9 suites green, N-scaling factor {k:.3}"))
}

fn pdmp_reproduction() -> Outcome {
    let phase_one = PdmpConfig {
        innovation_rate: 0.0,
        entry_mass: 0.05,
        extinction_threshold: 0.01,
        foster_c: 0.2,
        strategies: vec![
            LinearFitness::new(1.0, vec![0.0, 0.2, -0.1]),
            LinearFitness::new(0.8, vec![-0.1, 0.0, 0.3]),
            LinearFitness::new(0.9, vec![0.1, -0.2, 0.0]),
        ],
        initial_shares: vec![0.5, 0.3, 0.2],
        horizon: 2.0,
        seed: 11,
        step: 0.01,
        sample_interval: 0.5,
    };
    let r = pdmp_simulate(&phase_one).map_err(e)?;
    for w in r.samples.windows(2) {
        ensure(w[1].mean_fitness >= w[0].mean_fitness, || "phase-1 mean fitness decreased".into())?;
        ensure(w[1].shares[0] > w[0].shares[0] && w[1].shares[1] < w[0].shares[1], || {
            "phase-1 x1 should rise and x2 fall".into()
        })?;
    }

    let invasion = PdmpConfig {
        innovation_rate: 0.1,
        strategies: vec![
            LinearFitness::new(1.0, vec![-0.3]),
            LinearFitness::new(0.8, vec![]),
            LinearFitness::new(1.2, vec![-0.4]),
        ],
        initial_shares: vec![0.9, 0.1],
        horizon: 200.0,
        seed: 5,
        step: 0.02,
        ..phase_one.clone()
    };
    let r = pdmp_simulate(&invasion).map_err(e)?;
    let entry = r.events.iter().find(|ev| ev.kind == EventKind::Innovation(2)).ok_or("entrant never arrived")?;
    ensure(entry.pre_state[0] > 0.6, || format!("resident share at entry {}", entry.pre_state[0]))?;
    let peak = r
        .samples
        .iter()
        .filter_map(|s| s.active.iter().position(|&i| i == 2).map(|k| s.shares[k]))
        .fold(0.0, f64::max);
    ensure(peak > 2.0 * invasion.entry_mass, || format!("entrant peaked at {peak}"))?;

    let mut total = 0.0;
    let seeds = 16u64;
    for seed in 0..seeds {
        let cfg = PdmpConfig {
            innovation_rate: 0.1,
            strategies: random_linear_pool(2500, seed, 1.0, 0.05, 0.5),
            horizon: 1.0,
            seed,
            step: 0.05,
            sample_interval: 1.0,
            ..phase_one.clone()
        };
        total += stationary_active_set(&cfg, 10_000.0, 1_000.0).map_err(e)?.mean;
    }
    let mean = total / seeds as f64;
    ensure((2.5..=4.5).contains(&mean), || format!("stationary mean |S| {mean}"))?;
    Ok(format!("entrant peak {peak:.3}, stationary mean |S| {mean:.3}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("barbell frontier", 1, barbell_frontier),
        ("two-level stack", 1, two_level_stack),
        ("slack budget", 1, slack_budget_example),
        ("agentic capital tipping chain", 1, act_chain),
        ("governance formulas", 1, governance_formulas),
        ("umpire game", 1, umpire),
        ("Hamilton scenarios", 1, hamilton),
        ("Hopf lab", 60, hopf_lab),
        ("Kramers scaling", 120, kramers),
        ("property suites", 600, property_suites),
        ("PDMP reproduction", 60, pdmp_reproduction),
    ];
    let mut failed = 0;
    for (i, (name, budget_s, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(*budget_s) {
            outcome = Err(format!("took {took:.2?}, budget {budget_s} s"));
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
