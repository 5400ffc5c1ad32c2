use serde::Deserialize;

use super::Report;
use crate::dynamics::{check_lyapunov_monotone, integrate_replicator_sampled, swirl_decompose};
use crate::error::{validation, Result};
use crate::fitness::{FitnessModel, Matrix};
use crate::frontier::{
    normalize_types, optimal_unit_mix, optimize_portfolio, roc_frontier, write_frontier_csv, AgentTypeSpec,
};
use crate::hopf::{first_lyapunov_coefficient, hopf_curve, sweep, write_sweep_csv};
use crate::market::*;
use crate::pdmp::{
    pdmp_simulate, random_linear_pool, stationary_active_set, write_events_csv, write_trajectory_csv, EventKind,
    LinearFitness, PdmpConfig,
};
use crate::simplex::PopulationState;
use crate::stack::{analyze_stack, extend_block, safe_depth_uniform, slack_budget, LevelStack};
use crate::stats::{linear_fit, mean};
use crate::stochastic::{kramers_scaling, protection_bits, write_escape_csv, DoubleWell, NoiseConfig};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Analysis {
    Dynamics(DynamicsSpec),
    Frontier(FrontierSpec),
    Stack(StackSpec),
    Stochastic(StochasticSpec),
    Hopf(HopfSpec),
    Market(MarketSpec),
    Governance(GovernanceSpec),
    Pdmp(PdmpSpec),
    Voting(VotingSpec),
}

fn matrix(rows: &[Vec<f64>]) -> Result<Matrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return validation("matrix must be square and nonempty");
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
}

// ---------------------------------------------------------------- dynamics

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    pub payoff: Vec<Vec<f64>>,
    pub initial: Vec<f64>,
    pub horizon: f64,
    #[serde(default = "default_dyn_step")]
    pub step: f64,
    #[serde(default = "default_record")]
    pub record_every: usize,
    /// Externality bound used for the Lyapunov margin check.
    #[serde(default)]
    pub gamma: f64,
}

fn default_dyn_step() -> f64 {
    0.01
}

fn default_record() -> usize {
    10
}

fn dynamics(s: &DynamicsSpec) -> Result<Report> {
    let model = FitnessModel::linear(matrix(&s.payoff)?)?;
    let x0 = PopulationState::new(s.initial.clone())?;
    let traj = integrate_replicator_sampled(&x0, &model, s.horizon, s.step, s.record_every)?;
    let lyap = check_lyapunov_monotone(&traj, &model, s.gamma)?;
    let swirl = swirl_decompose(model.require_linear()?)?;
    let mut r = Report::default();
    let fin = traj.final_state();
    for (i, v) in fin.shares().iter().enumerate() {
        r.num(format!("final_x_{i}"), *v);
    }
    r.num("mean_fitness_initial", crate::dynamics::mean_fitness(&x0, &model)?);
    r.num("mean_fitness_final", crate::dynamics::mean_fitness(fin, &model)?);
    r.flag("lyapunov_monotone", lyap.monotone);
    r.num("lyapunov_min_margin", lyap.min_margin);
    r.text("swirl_ratio", swirl.swirl_ratio.value().map_or("inf".to_string(), |v| v.to_string()));
    let mut csv = Vec::new();
    traj.write_csv(&model, &mut csv)?;
    r.file("trajectory.csv", csv);
    r.summary = format!(
        "dynamics: {} types, horizon {}, final mean fitness {:.6}, lyapunov monotone {}",
        fin.dim(),
        s.horizon,
        crate::dynamics::mean_fitness(fin, &model)?,
        lyap.monotone
    );
    Ok(r)
}

// ---------------------------------------------------------------- frontier

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSpec {
    pub types: Vec<AgentTypeSpec>,
    #[serde(default)]
    pub names: Vec<String>,
    #[serde(default)]
    pub budget: Option<f64>,
    #[serde(default)]
    pub capacity: Option<f64>,
    #[serde(default)]
    pub load_cap: Option<f64>,
}

fn frontier(s: &FrontierSpec) -> Result<Report> {
    if !s.names.is_empty() && s.names.len() != s.types.len() {
        return validation("names must match types one to one");
    }
    let label = |i: usize| s.names.get(i).cloned().unwrap_or_else(|| i.to_string());
    let pts = normalize_types(&s.types)?;
    let hull = roc_frontier(&pts);
    let mut r = Report::default();
    for (i, p) in pts.iter().enumerate() {
        r.num(format!("a_{}", label(i)), p.load_per_cost);
        r.num(format!("b_{}", label(i)), p.return_per_cost);
        r.flag(format!("on_hull_{}", label(i)), hull.on_hull(i));
    }
    r.int("dominated_count", hull.dominated.len() as i64);
    let mut csv = Vec::new();
    write_frontier_csv(&pts, &hull, &mut csv)?;
    r.file("frontier.csv", csv);
    match (s.budget, s.capacity) {
        (Some(b), Some(q)) => {
            let sol = optimize_portfolio(&s.types, b, q)?;
            r.num("total_return", sol.total_return);
            r.num("budget_price", sol.budget_price);
            r.num("capacity_price", sol.capacity_price);
            r.flag("budget_binding", sol.binding.budget);
            r.flag("capacity_binding", sol.binding.capacity);
            for (i, n) in sol.counts.iter().enumerate() {
                r.num(format!("count_{}", label(i)), *n);
            }
            r.file("portfolio.txt", sol.to_kv().into_bytes());
        }
        (None, None) => {}
        _ => return validation("budget and capacity must be given together"),
    }
    if let Some(cap) = s.load_cap {
        for (i, a) in optimal_unit_mix(&s.types, cap)?.iter().enumerate() {
            r.num(format!("unit_mix_{}", label(i)), *a);
        }
    }
    let on: Vec<String> = hull.hull.iter().map(|&i| label(i)).collect();
    r.summary = format!("frontier: {} types, hull [{}], {} dominated", pts.len(), on.join(" "), hull.dominated.len());
    Ok(r)
}

// ---------------------------------------------------------------- stack

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub sigma0: f64,
    pub sigma_min: f64,
    #[serde(default)]
    pub thetas: Vec<f64>,
    #[serde(default)]
    pub uniform_theta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub gamma_new: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackSpec {
    #[serde(default)]
    pub gammas: Vec<f64>,
    #[serde(default)]
    pub cross_beta: Vec<Vec<f64>>,
    #[serde(default)]
    pub budget: Option<BudgetSpec>,
    #[serde(default)]
    pub extension: Option<ExtensionSpec>,
}

fn stack(s: &StackSpec) -> Result<Report> {
    let mut r = Report::default();
    let mut parts = Vec::new();
    if !s.gammas.is_empty() {
        let st = LevelStack::from_parts(&s.gammas, matrix(&s.cross_beta)?)?;
        let a = analyze_stack(&st)?;
        let n = a.gammas.len();
        for i in 0..n {
            for j in 0..n {
                r.num(format!("gain_{i}_{j}"), a.gain_matrix[(i, j)]);
            }
        }
        r.num("spectral_radius", a.spectral_radius);
        r.num("slack", a.slack);
        r.text("verdict", a.verdict.as_str());
        if let Some(w) = &a.weights {
            for (i, (v, al)) in w.v.iter().zip(&w.alpha).enumerate() {
                r.num(format!("v_{i}"), *v);
                r.num(format!("alpha_{i}"), *al);
            }
            r.num("weight_residual", w.residual);
        }
        r.file("gain.csv", a.matrix_csv().into_bytes());
        parts.push(format!("rho {:.6} ({})", a.spectral_radius, a.verdict.as_str()));
        if let Some(e) = &s.extension {
            let x = extend_block(&a, &e.b, &e.c, e.gamma_new)?;
            r.num("extended_spectral_radius", x.extended.spectral_radius);
            r.num("theta_effective", x.theta_effective);
            r.flag("slack_bound_ok", x.slack_bound_ok);
            parts.push(format!("extended rho {:.6}", x.extended.spectral_radius));
        }
    } else if s.extension.is_some() {
        return validation("an extension needs a base stack");
    }
    if let Some(b) = &s.budget {
        let sb = slack_budget(&b.thetas, b.sigma0, b.sigma_min)?;
        r.num("budget_total_cost", sb.total);
        r.num("budget", sb.budget);
        r.num("remaining_slack", sb.remaining_slack);
        r.flag("budget_safe", sb.safe);
        parts.push(format!("slack budget {:.4}/{:.4} safe {}", sb.total, sb.budget, sb.safe));
        if let Some(t) = b.uniform_theta {
            let d = safe_depth_uniform(t, b.sigma0, b.sigma_min)?;
            r.int("safe_depth", d as i64);
            parts.push(format!("safe depth {d}"));
        }
    }
    if parts.is_empty() {
        return validation("stack analysis needs gammas or a budget");
    }
    r.summary = format!("stack: {}", parts.join(", "));
    Ok(r)
}

// ---------------------------------------------------------------- stochastic

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StochasticSpec {
    /// Barrier of the symmetric double well, in protection-bit units.
    pub barrier: f64,
    pub sigmas: Vec<f64>,
    pub runs: usize,
    #[serde(default = "default_em_step")]
    pub step: f64,
    #[serde(default)]
    pub max_steps: Option<u64>,
}

fn default_em_step() -> f64 {
    0.01
}

fn stochastic(s: &StochasticSpec, seed: u64) -> Result<Report> {
    let well = DoubleWell::symmetric(s.barrier);
    let mut noise = NoiseConfig::new(s.sigmas.first().copied().unwrap_or(1.0), seed, s.step, s.runs)?;
    if let Some(m) = s.max_steps {
        noise.max_steps = m;
    }
    let k = kramers_scaling(|x| well.drift(x), -1.0, |x| x >= 0.0, &s.sigmas, &noise, Some(s.barrier))?;
    let mut r = Report::default();
    for (sig, m) in s.sigmas.iter().zip(&k.mean_escape_times) {
        r.num(format!("mean_escape_time_{sig}"), *m);
        r.num(format!("protection_bits_{sig}"), protection_bits(s.barrier, *sig)?);
    }
    r.num("kramers_slope", k.log_fit_slope);
    r.num("kramers_intercept", k.intercept);
    r.num("r_squared", k.r_squared);
    let mut csv = Vec::new();
    write_escape_csv(&k.samples, &mut csv)?;
    r.file("escape.csv", csv);
    r.summary = format!(
        "stochastic: barrier {}, {} runs x {} noise levels, fitted slope {:.4} (r2 {:.3})",
        s.barrier,
        s.runs,
        s.sigmas.len(),
        k.log_fit_slope,
        k.r_squared
    );
    Ok(r)
}

// ---------------------------------------------------------------- hopf

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSpec {
    pub mu: f64,
    /// Distances below the critical κ at which to measure.
    pub offsets: Vec<f64>,
    pub horizon: f64,
    pub transient: f64,
    #[serde(default = "default_hopf_step")]
    pub step: f64,
}

fn default_hopf_step() -> f64 {
    0.05
}

fn hopf(s: &HopfSpec) -> Result<Report> {
    let kc = hopf_curve(s.mu)?;
    let kappas: Vec<f64> = s.offsets.iter().map(|o| kc - o).collect();
    let rows = sweep(s.mu, &kappas, s.horizon, s.transient, s.step)?;
    let mut r = Report::default();
    r.num("kappa_c", kc);
    r.num("l1", first_lyapunov_coefficient(s.mu)?);
    for (o, row) in s.offsets.iter().zip(&rows) {
        r.num(format!("amplitude_{o}"), row.amplitude_measured);
        r.num(format!("amplitude_predicted_{o}"), row.amplitude_predicted);
        if let Some(p) = row.period {
            r.num(format!("period_{o}"), p);
        }
    }
    let usable: Vec<(f64, f64)> =
        s.offsets.iter().zip(&rows).filter(|(o, row)| **o > 0.0 && row.amplitude_measured > 0.0).map(|(o, row)| (o.ln(), row.amplitude_measured.ln())).collect();
    let mut exponent = None;
    if usable.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
        let e = linear_fit(&xs, &ys).slope;
        r.num("amplitude_exponent", e);
        exponent = Some(e);
    }
    let mut csv = Vec::new();
    write_sweep_csv(&rows, &mut csv)?;
    r.file("sweep.csv", csv);
    r.summary = format!(
        "hopf: mu {}, kappa_c {:.12}, {} offsets, amplitude exponent {}",
        s.mu,
        kc,
        rows.len(),
        exponent.map_or("n/a".into(), |e| format!("{e:.4}"))
    );
    Ok(r)
}

// ---------------------------------------------------------------- market

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SCurveSpec {
    pub m0: f64,
    pub steps: usize,
    /// Defaults to four times the tipping index.
    #[serde(default)]
    pub steepness: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonCase {
    pub r: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForkSpec {
    pub losses: Vec<f64>,
    pub compensation: f64,
    pub fork_cost: f64,
    pub adopted: [f64; 2],
    pub forked: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EliteSpec {
    pub weights: Vec<f64>,
    pub indices: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSpec {
    #[serde(default)]
    pub tipping: Option<TippingParams>,
    #[serde(default)]
    pub shadow: Option<ShadowParams>,
    /// Institutional quality at monopoly and under competition.
    #[serde(default)]
    pub quality: Option<[f64; 2]>,
    /// `[T, R, P]`.
    #[serde(default)]
    pub grim: Option<[f64; 3]>,
    #[serde(default)]
    pub s_curve: Option<SCurveSpec>,
    /// `[W, σ]` for the protection bits of the monopoly state.
    #[serde(default)]
    pub protection: Option<[f64; 2]>,
    #[serde(default)]
    pub hamilton: Vec<HamiltonCase>,
    #[serde(default)]
    pub fork: Option<ForkSpec>,
    #[serde(default)]
    pub elite: Option<EliteSpec>,
}

fn market(s: &MarketSpec) -> Result<Report> {
    let mut r = Report::default();
    let mut parts = Vec::new();
    let mut index = None;
    if let Some(p) = &s.tipping {
        p.validate()?;
        let sm = myopic_slope(p);
        let t = tipping_index(sm, p.rho_discount)?;
        index = Some(t);
        r.num("s_myo", sm);
        r.num("tipping_index", t);
        r.flag("tips", t.abs() > 1.0);
        r.num("beta_crit", beta_crit(p.tau_friction, p.rho_discount, p.alpha_intrinsic, None)?);
        r.num("beta_crit_neutral", beta_crit(p.tau_friction, p.rho_discount, 0.0, None)?);
        let ss = spawn_adjusted_slope(p);
        r.num("s_myo_spawn", ss);
        match tipping_index(ss, p.rho_discount) {
            Ok(v) => r.num("tipping_index_spawn", v),
            Err(_) => r.text("tipping_index_spawn", "divergent"),
        }
        parts.push(format!("T {t:.4}"));
    }
    if let Some(c) = &s.s_curve {
        let k = match (c.steepness, index) {
            (Some(k), _) => k,
            (None, Some(t)) => default_steepness(t),
            (None, None) => return validation("s_curve needs a steepness or tipping parameters"),
        };
        let path = iterate_s_curve(c.m0, k, c.steps)?;
        r.num("s_curve_steepness", k);
        r.num("s_curve_final", *path.last().unwrap());
        let mut csv = String::from("step,share\n");
        for (i, m) in path.iter().enumerate() {
            csv.push_str(&format!("{i},{m}\n"));
        }
        r.file("s_curve.csv", csv.into_bytes());
        parts.push(format!("s-curve final {:.4}", path.last().unwrap()));
    }
    let mut gamma_monopoly = None;
    if let Some(sh) = &s.shadow {
        sh.validate()?;
        r.num("institutional_floor", institutional_floor(sh));
        if let Some([qm, qc]) = s.quality {
            let gm = lineage_shadow(qm, sh)?;
            gamma_monopoly = Some(gm);
            r.num("gamma_monopoly", gm);
            r.num("gamma_competitive", lineage_shadow(qc, sh)?);
            r.num("slack_monopoly", 1.0 - gm);
            r.flag("lyapunov_preserved", gm < 1.0);
            parts.push(format!("gamma(I) {gm:.4}"));
        }
    }
    if let Some([w, sigma]) = s.protection {
        let p = crate::stochastic::protection_bits(w, sigma)?;
        r.num("protection_bits", p);
        parts.push(format!("p {p:.2}"));
    }
    if let Some([t, rr, p]) = s.grim {
        let d = grim_trigger_threshold(t, rr, p)?;
        r.num("delta_star", d);
        if let Some(gm) = gamma_monopoly {
            r.num("delta_eff", 1.0 - gm);
            r.flag("cooperation_sustainable", 1.0 - gm >= d);
        }
        parts.push(format!("delta* {d:.4}"));
    }
    for (i, h) in s.hamilton.iter().enumerate() {
        r.flag(format!("hamilton_invade_{i}"), hamilton_invade(h.r, h.b, h.c));
    }
    if !s.hamilton.is_empty() {
        let v: Vec<String> = s.hamilton.iter().map(|h| hamilton_invade(h.r, h.b, h.c).to_string()).collect();
        parts.push(format!("hamilton [{}]", v.join(" ")));
    }
    if let Some(f) = &s.fork {
        let rep = fork_analysis(&f.losses, f.compensation, f.fork_cost, f.adopted, f.forked)?;
        r.flag("fork_viable", rep.fork_viable);
        r.num("fork_total_loss", rep.total_loss);
        r.int("fork_equilibria", rep.nash_equilibria.len() as i64);
        let eq: Vec<String> =
            rep.nash_equilibria.iter().map(|(a, b)| format!("{}/{}", a.as_str(), b.as_str())).collect();
        r.text("fork_nash", eq.join(" "));
        if let Some((a, b)) = rep.pareto_dominant {
            r.text("fork_pareto_dominant", format!("{}/{}", a.as_str(), b.as_str()));
        }
        let mut csv = String::from("row,col,row_payoff,col_payoff\n");
        for a in ForkAction::BOTH {
            for b in ForkAction::BOTH {
                let (x, y) = rep.payoff_matrix[a as usize][b as usize];
                csv.push_str(&format!("{},{},{x},{y}\n", a.as_str(), b.as_str()));
            }
        }
        r.file("fork_payoffs.csv", csv.into_bytes());
        parts.push(format!("fork viable {}", rep.fork_viable));
    }
    if let Some(e) = &s.elite {
        let el = elite_tipping(&e.weights, &e.indices)?;
        r.num("elite_weighted", el.weighted);
        r.num("elite_unweighted", el.unweighted);
        r.flag("elite_covariance_positive", el.covariance_positive);
    }
    if parts.is_empty() && s.elite.is_none() {
        return validation("market analysis has nothing to evaluate");
    }
    r.summary = format!("market: {}", parts.join(", "));
    Ok(r)
}

// ---------------------------------------------------------------- governance

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UmpireSpec {
    pub n: usize,
    pub beta: f64,
    pub endowment: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtectionSpec {
    pub barriers: Vec<f64>,
    pub sigma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscountSpec {
    pub b: f64,
    pub growth: f64,
    pub quality: f64,
    pub gamma1: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NPlayerSpec {
    pub cost: f64,
    pub benefit: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GovernanceSpec {
    #[serde(default)]
    pub thresholds: Option<GovernanceParams>,
    #[serde(default)]
    pub umpire: Option<UmpireSpec>,
    #[serde(default)]
    pub protection: Option<ProtectionSpec>,
    #[serde(default)]
    pub discounts: Option<DiscountSpec>,
    #[serde(default)]
    pub n_player: Option<NPlayerSpec>,
    #[serde(default)]
    pub shadow: Option<ShadowParams>,
}

fn governance(s: &GovernanceSpec) -> Result<Report> {
    let mut r = Report::default();
    let mut parts = Vec::new();
    if let Some(p) = &s.thresholds {
        let t = governance_thresholds(p)?;
        r.num("capture_eps_crit", t.capture_eps_crit);
        r.num("coalition_min_weight", t.coalition_min_weight);
        r.num("symbiosis_min_weight", t.symbiosis_min_weight);
        r.num("optimal_bits", t.optimal_bits);
        parts.push(format!("coalition {:.4}, symbiosis {:.4}, bits {:.3}", t.coalition_min_weight, t.symbiosis_min_weight, t.optimal_bits));
    }
    if let Some(u) = &s.umpire {
        let g = umpire_game(u.n, u.beta, u.endowment)?;
        r.num("g_nash", g.g_nash);
        r.num("g_per_lineage", g.g_per_lineage);
        r.num("u_nash", g.u_nash);
        r.num("g_social", g.g_social);
        r.num("u_social", g.u_social);
        r.num("efficiency_loss", g.efficiency_loss);
        r.flag("nash_at_cap", g.nash_at_cap);
        r.flag("social_clipped", g.social_clipped);
        parts.push(format!("umpire loss {:.1}%", 100.0 * g.efficiency_loss));
    }
    if let Some(p) = &s.protection {
        for w in &p.barriers {
            r.num(format!("protection_bits_{w}"), crate::stochastic::protection_bits(*w, p.sigma)?);
        }
        parts.push(format!("{} protection levels", p.barriers.len()));
    }
    if let Some(d) = &s.discounts {
        let u = unify_discounts(d.b, d.growth, d.quality, d.gamma1, d.nu)?;
        r.num("rho_amplifier", u.rho_amplifier);
        r.num("lineage_shadow", u.lineage_shadow);
        r.num("delta_eff", u.delta_eff);
        parts.push(format!("rho {:.4}", u.rho_amplifier));
    }
    if let Some(n) = &s.n_player {
        let d = n_player_threshold(n.cost, n.benefit, n.n)?;
        r.num("n_player_threshold", d);
        parts.push(format!("n-player delta {d:.4}"));
    }
    if let Some(sh) = &s.shadow {
        sh.validate()?;
        let f = institutional_floor(sh);
        r.num("institutional_floor", f);
        parts.push(format!("I_min {f:.4}"));
    }
    if parts.is_empty() {
        return validation("governance analysis has nothing to evaluate");
    }
    r.summary = format!("governance: {}", parts.join(", "));
    Ok(r)
}

// ---------------------------------------------------------------- pdmp

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoolSpec {
    pub size: usize,
    #[serde(default = "one")]
    pub base: f64,
    #[serde(default)]
    pub base_spread: f64,
    #[serde(default)]
    pub interaction: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarySpec {
    pub horizon: f64,
    pub burn_in: f64,
    /// Independent pools/paths averaged (seeds `seed .. seed + replicates`).
    #[serde(default = "one_usize")]
    pub replicates: usize,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdmpSpec {
    pub innovation_rate: f64,
    pub entry_mass: f64,
    pub extinction_threshold: f64,
    pub foster_c: f64,
    pub initial_shares: Vec<f64>,
    pub horizon: f64,
    #[serde(default = "default_pdmp_step")]
    pub step: f64,
    #[serde(default = "default_sample")]
    pub sample_interval: f64,
    /// Explicit strategies; the first `initial_shares.len()` start active.
    #[serde(default)]
    pub strategies: Vec<LinearFitness>,
    /// Random strategies appended after the explicit ones.
    #[serde(default)]
    pub pool: Option<PoolSpec>,
    #[serde(default)]
    pub stationary: Option<StationarySpec>,
}

fn default_pdmp_step() -> f64 {
    0.01
}

fn default_sample() -> f64 {
    0.1
}

fn pdmp_config(s: &PdmpSpec, seed: u64) -> PdmpConfig {
    let mut strategies = s.strategies.clone();
    if let Some(p) = &s.pool {
        strategies.extend(random_linear_pool(p.size, seed, p.base, p.base_spread, p.interaction));
    }
    PdmpConfig {
        innovation_rate: s.innovation_rate,
        entry_mass: s.entry_mass,
        extinction_threshold: s.extinction_threshold,
        foster_c: s.foster_c,
        strategies,
        initial_shares: s.initial_shares.clone(),
        horizon: s.horizon,
        seed,
        step: s.step,
        sample_interval: s.sample_interval,
    }
}

fn pdmp(s: &PdmpSpec, seed: u64) -> Result<Report> {
    let cfg = pdmp_config(s, seed);
    let rep = pdmp_simulate(&cfg)?;
    let mut r = Report::default();
    let innov = rep.events.iter().filter(|e| matches!(e.kind, EventKind::Innovation(_))).count();
    r.int("innovations", innov as i64);
    r.int("extinctions", (rep.events.len() - innov) as i64);
    r.int("final_active_size", rep.final_active.len() as i64);
    let last = rep.samples.last().expect("initial sample");
    r.num("mean_fitness_final", last.mean_fitness);
    r.num("foster_final", last.foster);
    r.flag("pool_exhausted", rep.pool_exhausted);
    r.flag("segments_monotone", rep.segments.iter().all(|g| g.mean_fitness_monotone));
    let mut ev = Vec::new();
    write_events_csv(&rep, &mut ev)?;
    r.file("events.csv", ev);
    let mut tr = Vec::new();
    write_trajectory_csv(&rep, &mut tr)?;
    r.file("trajectory.csv", tr);
    let mut summary = format!("pdmp: {} events, final |S| = {}", rep.events.len(), rep.final_active.len());
    if let Some(st) = &s.stationary {
        if st.replicates == 0 {
            return validation("replicates must be at least 1");
        }
        let mut means = Vec::new();
        let mut errs = Vec::new();
        let mut eeb = true;
        for k in 0..st.replicates as u64 {
            let c = pdmp_config(s, seed.wrapping_add(k));
            let a = stationary_active_set(&c, st.horizon, st.burn_in)?;
            means.push(a.mean);
            errs.push(a.stderr);
            eeb &= a.eeb_satisfied;
        }
        let m = mean(&means);
        r.num("stationary_mean_active", m);
        r.num("stationary_stderr", if means.len() > 1 {
            let v = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
            (v / means.len() as f64).sqrt()
        } else {
            errs[0]
        });
        r.flag("eeb_satisfied", eeb);
        summary.push_str(&format!(", stationary mean |S| {m:.3}"));
    }
    r.summary = summary;
    Ok(r)
}

// ---------------------------------------------------------------- voting

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VotingSpec {
    pub alternatives: Vec<String>,
    pub ballots: Vec<Vec<String>>,
    pub rules: Vec<VotingRule>,
    #[serde(default)]
    pub max_k: Option<usize>,
}

fn voting(s: &VotingSpec) -> Result<Report> {
    let p = VotingProfile::new(s.alternatives.clone(), &s.ballots)?;
    if s.rules.is_empty() {
        return validation("no voting rules given");
    }
    let mut r = Report::default();
    let mut csv = String::from("rule,winner,found,k,ballot,new_winner\n");
    let mut found_any = 0;
    for &rule in &s.rules {
        let name = rule.as_str();
        let w = winner(rule, &p);
        let m = spawn_manipulation_search(rule, &p, s.max_k);
        r.text(format!("winner_{name}"), p.label(w));
        r.flag(format!("found_{name}"), m.found);
        let ballot = m.ballot.as_ref().map(|b| b.iter().map(|&i| p.label(i)).collect::<Vec<_>>().join(">"));
        if let Some(b) = &m.ballot {
            found_any += 1;
            r.int(format!("k_{name}"), m.k as i64);
            r.text(format!("ballot_{name}"), ballot.clone().unwrap());
            r.text(format!("new_winner_{name}"), p.label(m.new_winner));
            r.flag(format!("replay_ok_{name}"), is_manipulation(rule, &p, b, m.k) == Some(m.new_winner));
        }
        csv.push_str(&format!(
            "{name},{},{},{},{},{}\n",
            p.label(w),
            m.found,
            m.k,
            ballot.unwrap_or_default(),
            if m.found { p.label(m.new_winner) } else { "" }
        ));
    }
    r.int("manipulation_bound", manipulation_bound(&p) as i64);
    r.file("manipulation.csv", csv.into_bytes());
    r.summary = format!("voting: {} ballots, {}/{} rules manipulable", p.ballots().len(), found_any, s.rules.len());
    Ok(r)
}

pub(super) fn run(a: &Analysis, seed: u64) -> Result<Report> {
    match a {
        Analysis::Dynamics(s) => dynamics(s),
        Analysis::Frontier(s) => frontier(s),
        Analysis::Stack(s) => stack(s),
        Analysis::Stochastic(s) => stochastic(s, seed),
        Analysis::Hopf(s) => hopf(s),
        Analysis::Market(s) => market(s),
        Analysis::Governance(s) => governance(s),
        Analysis::Pdmp(s) => pdmp(s, seed),
        Analysis::Voting(s) => voting(s),
    }
}
