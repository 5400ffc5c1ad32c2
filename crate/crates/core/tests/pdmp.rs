use tse_core::pdmp::*;

fn phase_one() -> PdmpConfig {
    PdmpConfig {
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
    }
}

#[test]
fn phase_one_selection() {
    let r = pdmp_simulate(&phase_one()).unwrap();
    assert!(r.events.is_empty());
    let s = &r.samples;
    // direct evaluation at x₀: f = (1.04, 0.81, 0.89)
    assert!((s[0].mean_fitness - (0.5 * 1.04 + 0.3 * 0.81 + 0.2 * 0.89)).abs() < 1e-12);
    assert!((s[0].mean_fitness - 0.941).abs() < 1e-12);
    for w in s.windows(2) {
        assert!(w[1].mean_fitness > w[0].mean_fitness);
        assert!(w[1].shares[0] > w[0].shares[0]);
        assert!(w[1].shares[1] < w[0].shares[1]);
    }
    assert!(r.segments.iter().all(|g| g.mean_fitness_monotone));
}

#[test]
fn specialist_invades_saturated_resident() {
    let cfg = PdmpConfig {
        innovation_rate: 0.1,
        entry_mass: 0.05,
        extinction_threshold: 0.01,
        foster_c: 0.2,
        strategies: vec![
            LinearFitness::new(1.0, vec![-0.3]),
            LinearFitness::new(0.8, vec![]),
            LinearFitness::new(1.2, vec![-0.4]),
        ],
        initial_shares: vec![0.9, 0.1],
        horizon: 200.0,
        seed: 5,
        step: 0.02,
        sample_interval: 0.5,
    };
    let r = pdmp_simulate(&cfg).unwrap();
    let entry = r.events.iter().find(|e| e.kind == EventKind::Innovation(2)).expect("entrant arrives");
    assert!(entry.time < 150.0);
    assert!(entry.pre_state[0] > 0.6, "resident share at entry {}", entry.pre_state[0]);
    let peak = r
        .samples
        .iter()
        .filter_map(|s| s.active.iter().position(|&i| i == 2).map(|k| s.shares[k]))
        .fold(0.0, f64::max);
    assert!(peak > 2.0 * cfg.entry_mass, "peak entrant share {peak}");
    assert!(!r.events.iter().any(|e| e.kind == EventKind::Extinction(2)));
}

fn pooled(seed: u64, rate: f64) -> PdmpConfig {
    PdmpConfig {
        innovation_rate: rate,
        entry_mass: 0.05,
        extinction_threshold: 0.01,
        foster_c: 0.2,
        strategies: random_linear_pool(2500, seed, 1.0, 0.05, 0.5),
        initial_shares: vec![0.5, 0.3, 0.2],
        horizon: 1.0,
        seed,
        step: 0.05,
        sample_interval: 1.0,
    }
}

#[test]
fn stationary_size_and_pressure() {
    let seeds = 0..16u64;
    let mut base = Vec::new();
    let mut doubled = Vec::new();
    for seed in seeds {
        let a = stationary_active_set(&pooled(seed, 0.1), 10_000.0, 1_000.0).unwrap();
        let b = stationary_active_set(&pooled(seed, 0.2), 10_000.0, 1_000.0).unwrap();
        assert!(!a.pool_exhausted && a.eeb_satisfied);
        base.push(a.mean);
        doubled.push(b.mean);
    }
    let m = base.iter().sum::<f64>() / base.len() as f64;
    let d = doubled.iter().sum::<f64>() / doubled.len() as f64;
    assert!((2.5..=4.5).contains(&m), "mean |S| {m}");
    assert!(d > m, "doubling the rate gave {d} vs {m}");
}

#[test]
fn csv_outputs() {
    let mut cfg = phase_one();
    cfg.innovation_rate = 1.0;
    cfg.strategies.push(LinearFitness::new(0.2, vec![]));
    cfg.horizon = 10.0;
    let r = pdmp_simulate(&cfg).unwrap();
    let mut ev = Vec::new();
    write_events_csv(&r, &mut ev).unwrap();
    let ev = String::from_utf8(ev).unwrap();
    assert!(ev.starts_with("time,kind,strategy,shares_post\n"));
    assert!(ev.contains(",innovation,3,"));
    let mut tr = Vec::new();
    write_trajectory_csv(&r, &mut tr).unwrap();
    let tr = String::from_utf8(tr).unwrap();
    assert!(tr.starts_with("t,x_0,x_1,x_2,x_3,mean_fitness,active_set_size,foster_value\n"));
    assert_eq!(tr.lines().count(), r.samples.len() + 1);
}
