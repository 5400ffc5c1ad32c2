use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForkAction {
    Stay = 0,
    Fork = 1,
}

impl ForkAction {
    pub const BOTH: [ForkAction; 2] = [ForkAction::Stay, ForkAction::Fork];

    pub fn as_str(self) -> &'static str {
        match self {
            ForkAction::Stay => "stay",
            ForkAction::Fork => "fork",
        }
    }
}

/// `m[row][col] = (row payoff, column payoff)`, indexed by [`ForkAction`].
pub type PayoffMatrix = [[(f64, f64); 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct ForkReport {
    pub total_loss: f64,
    pub fork_viable: bool,
    pub payoff_matrix: PayoffMatrix,
    pub nash_equilibria: Vec<(ForkAction, ForkAction)>,
    /// An equilibrium weakly better for both players than every other one,
    /// strictly for at least one.
    pub pareto_dominant: Option<(ForkAction, ForkAction)>,
}

/// Pure Nash equilibria of a 2×2 bimatrix game.
pub fn pure_nash_2x2(m: &PayoffMatrix) -> Vec<(ForkAction, ForkAction)> {
    let mut out = Vec::new();
    for a in ForkAction::BOTH {
        for b in ForkAction::BOTH {
            let (i, j) = (a as usize, b as usize);
            let row_ok = m[i][j].0 >= m[1 - i][j].0;
            let col_ok = m[i][j].1 >= m[i][1 - j].1;
            if row_ok && col_ok {
                out.push((a, b));
            }
        }
    }
    out
}

fn pareto_dominant(m: &PayoffMatrix, eq: &[(ForkAction, ForkAction)]) -> Option<(ForkAction, ForkAction)> {
    let pay = |e: &(ForkAction, ForkAction)| m[e.0 as usize][e.1 as usize];
    eq.iter()
        .find(|e| {
            let p = pay(e);
            eq.iter().all(|o| {
                let q = pay(o);
                o == *e || (p.0 >= q.0 && p.1 >= q.1 && (p.0 > q.0 || p.1 > q.1))
            })
        })
        .copied()
}

/// Two losers deciding whether to fork after an adverse constitutional change.
///
/// A fork happens iff compensation falls short of the total loss. Payoffs
/// per player: staying yields the post-change utility `adopted[ℓ]`; a joint
/// fork yields `forked[ℓ]`; a solo fork fails and costs `fork_cost` on top
/// of the post-change utility.
pub fn fork_analysis(
    losses: &[f64],
    compensation: f64,
    fork_cost: f64,
    adopted: [f64; 2],
    forked: [f64; 2],
) -> Result<ForkReport> {
    if losses.is_empty() || losses.iter().any(|&x| !(x > 0.0)) {
        return validation("every loser's loss must be > 0");
    }
    if !(compensation >= 0.0) || !(fork_cost > 0.0) {
        return validation("compensation must be >= 0 and fork cost > 0");
    }
    let total_loss: f64 = losses.iter().sum();
    let cell = |i: usize, me: ForkAction, other: ForkAction| match (me, other) {
        (ForkAction::Stay, _) => adopted[i],
        (ForkAction::Fork, ForkAction::Fork) => forked[i],
        (ForkAction::Fork, ForkAction::Stay) => adopted[i] - fork_cost,
    };
    let mut m = [[(0.0, 0.0); 2]; 2];
    for a in ForkAction::BOTH {
        for b in ForkAction::BOTH {
            m[a as usize][b as usize] = (cell(0, a, b), cell(1, b, a));
        }
    }
    let nash_equilibria = pure_nash_2x2(&m);
    let pareto_dominant = pareto_dominant(&m, &nash_equilibria);
    Ok(ForkReport { total_loss, fork_viable: compensation < total_loss, payoff_matrix: m, nash_equilibria, pareto_dominant })
}

/// The printed amendment-game table, kept verbatim. Its (Fork, Stay) cell
/// does not follow the solo-fork cost rule used by [`fork_analysis`].
pub fn amendment_fixture() -> PayoffMatrix {
    [[(12.0, 14.0), (12.0, 9.0)], [(15.0, 14.0), (20.0, 15.0)]]
}
