/// A bundled scenario reproducing one worked example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Golden {
    pub name: &'static str,
    pub example: &'static str,
    pub asserts: &'static str,
    pub source: &'static str,
}

macro_rules! golden {
    ($name:literal, $example:literal, $asserts:literal) => {
        Golden {
            name: $name,
            example: $example,
            asserts: $asserts,
            source: include_str!(concat!("../../goldens/", $name, ".toml")),
        }
    };
}

const GOLDENS: &[Golden] = &[
    golden!("act_full", "Agentic capital tipping chain", "S_myo, T, beta_crit, spawn T, gamma(5), p, delta*, S-curve"),
    golden!("amendment_fork", "Constitutional amendment game", "fork viability, two pure equilibria, Pareto-dominant fork"),
    golden!("barbell_frontier", "ROC frontier and barbell distribution", "(a, b) table, G dominated, pure-P portfolio, unit mix 2/3"),
    golden!("governance_formulas", "Coalition, symbiosis, entrenchment and protection bits", "0.15, 0.1304, 6.58 bits, 12/25 bits, I_min 10"),
    golden!("hamilton_rule", "Hamilton's rule for lineage cooperation", "invade = (false, true, true)"),
    golden!("hopf_sweep", "Biased rock-paper-scissors Hopf bifurcation", "kappa_c, l1 < 0, amplitude exponent 0.5 +- 0.1"),
    golden!("kramers_double_well", "Kramers escape from a double well", "slope of ln E[tau] vs 1/sigma in [0.175, 0.325]"),
    golden!("pdmp_sample", "Innovation PDMP sample path", "mean fitness monotone between events"),
    golden!("pdmp_stationary", "Innovation PDMP stationary active set", "mean |S| in [2.5, 4.5]"),
    golden!("rps_cycle", "Rock-paper-scissors cycling", "pure swirl payoff"),
    golden!("slack_budget", "Slack budget for a seven-level stack", "total cost 0.4154, B 1.609, remaining 0.330, depth 22"),
    golden!("spawn_manipulation", "Spawn manipulation of plurality", "b elected by one spawned ballot, replay agrees"),
    golden!("two_level_stack", "Two-level poiesis", "Gamma entries, rho 0.164, weight residual"),
    golden!("umpire_game", "Umpire public good provision", "G_nash 25, U_nash 145, G_social 500, loss 35%"),
];

/// All bundled scenarios, ordered by name.
pub fn goldens() -> &'static [Golden] {
    GOLDENS
}

pub fn golden(name: &str) -> Option<&'static Golden> {
    GOLDENS.iter().find(|g| g.name == name)
}
