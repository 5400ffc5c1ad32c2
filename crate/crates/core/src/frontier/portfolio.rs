use std::fmt::Write as _;

use super::AgentTypeSpec;
use crate::error::{config, Error, Result};

/// Counts below this are treated as zero when reading off a support.
pub const SUPPORT_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Binding {
    pub budget: bool,
    pub capacity: bool,
}

impl Binding {
    pub fn count(&self) -> usize {
        self.budget as usize + self.capacity as usize
    }
}

/// Optimum of `max Σ rᵢnᵢ  s.t.  Σ cᵢnᵢ ≤ B, Σ ℓᵢnᵢ ≤ Q, n ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioSolution {
    pub counts: Vec<f64>,
    pub total_return: f64,
    /// Shadow price of the budget constraint.
    pub budget_price: f64,
    /// Shadow price of the capacity constraint.
    pub capacity_price: f64,
    pub binding: Binding,
    /// Another vertex attains the same return; the lowest-index one was kept.
    pub degenerate: bool,
}

impl PortfolioSolution {
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&i| self.counts[i] > SUPPORT_TOL).collect()
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "total_return = {}", self.total_return);
        let _ = writeln!(s, "budget_price = {}", self.budget_price);
        let _ = writeln!(s, "capacity_price = {}", self.capacity_price);
        let _ = writeln!(s, "budget_binding = {}", self.binding.budget);
        let _ = writeln!(s, "capacity_binding = {}", self.binding.capacity);
        let _ = writeln!(s, "degenerate = {}", self.degenerate);
        for (i, n) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "count_{i} = {n}");
        }
        s
    }
}

/// Solve a 2x2 system `[[a, b], [c, d]] (x, y) = (e, f)`.
fn solve2(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Option<(f64, f64)> {
    let det = a * d - b * c;
    if det.abs() <= 1e-14 * (a.abs() + b.abs()) * (c.abs() + d.abs()) {
        return None;
    }
    Some(((e * d - b * f) / det, (a * f - e * c) / det))
}

/// Exact LP optimum by enumerating basic feasible solutions; with two
/// resource rows every vertex has at most two positive counts.
pub fn optimize_portfolio(types: &[AgentTypeSpec], budget: f64, capacity: f64) -> Result<PortfolioSolution> {
    if types.is_empty() {
        return config("no agent types given");
    }
    if !(budget > 0.0) || !(capacity > 0.0) {
        return config(format!("budget and capacity must be positive, got {budget} and {capacity}"));
    }
    for t in types {
        t.validate()?;
    }
    let n = types.len();
    let feasible = |x: &[f64]| {
        let c: f64 = x.iter().zip(types).map(|(n, t)| n * t.cost).sum();
        let l: f64 = x.iter().zip(types).map(|(n, t)| n * t.load).sum();
        x.iter().all(|&v| v >= -1e-12) && c <= budget * (1.0 + 1e-12) && l <= capacity * (1.0 + 1e-12)
    };

    let mut candidates: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for (i, t) in types.iter().enumerate() {
        let mut x = vec![0.0; n];
        x[i] = (budget / t.cost).min(capacity / t.load);
        candidates.push(x);
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ti, tj) = (&types[i], &types[j]);
            if let Some((ni, nj)) = solve2(ti.cost, tj.cost, ti.load, tj.load, budget, capacity) {
                if ni > 0.0 && nj > 0.0 {
                    let mut x = vec![0.0; n];
                    x[i] = ni;
                    x[j] = nj;
                    candidates.push(x);
                }
            }
        }
    }

    let value = |x: &[f64]| x.iter().zip(types).map(|(n, t)| n * t.return_rate).sum::<f64>();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut degenerate = false;
    for x in candidates.into_iter().filter(|x| feasible(x)) {
        let v = value(&x);
        match &best {
            None => best = Some((x, v)),
            Some((bx, bv)) => {
                let scale = bv.abs().max(1.0);
                if v > bv + TIE_TOL * scale {
                    best = Some((x, v));
                    degenerate = false;
                } else if (v - bv).abs() <= TIE_TOL * scale
                    && x.iter().zip(bx).any(|(a, b)| (a - b).abs() > SUPPORT_TOL)
                {
                    degenerate = true;
                }
            }
        }
    }
    let (counts, total_return) = best.expect("origin is always feasible");

    let used_c: f64 = counts.iter().zip(types).map(|(n, t)| n * t.cost).sum();
    let used_l: f64 = counts.iter().zip(types).map(|(n, t)| n * t.load).sum();
    let binding = Binding {
        budget: budget - used_c <= SUPPORT_TOL * budget,
        capacity: capacity - used_l <= SUPPORT_TOL * capacity,
    };
    let (budget_price, capacity_price) = dual_prices(types, budget, capacity, binding);

    let dual = budget * budget_price + capacity * capacity_price;
    if (dual - total_return).abs() > 1e-9 * total_return.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "duality gap {} between primal {total_return} and dual {dual}",
            dual - total_return
        )));
    }
    Ok(PortfolioSolution { counts, total_return, budget_price, capacity_price, binding, degenerate })
}

/// Vertex enumeration of `min μB + λQ  s.t.  μcᵢ + λℓᵢ ≥ rᵢ, μ, λ ≥ 0`.
/// A slack primal constraint fixes its price at zero.
fn dual_prices(types: &[AgentTypeSpec], budget: f64, capacity: f64, binding: Binding) -> (f64, f64) {
    let max_ratio = |f: &dyn Fn(&AgentTypeSpec) -> f64| {
        types.iter().map(|t| t.return_rate / f(t)).fold(0.0, f64::max)
    };
    match (binding.budget, binding.capacity) {
        (false, false) => (0.0, 0.0),
        (true, false) => (max_ratio(&|t| t.cost), 0.0),
        (false, true) => (0.0, max_ratio(&|t| t.load)),
        (true, true) => {
            let mut cands = vec![(max_ratio(&|t| t.cost), 0.0), (0.0, max_ratio(&|t| t.load))];
            for i in 0..types.len() {
                for j in i + 1..types.len() {
                    let (a, b) = (&types[i], &types[j]);
                    if let Some((mu, la)) = solve2(a.cost, a.load, b.cost, b.load, a.return_rate, b.return_rate) {
                        if mu >= 0.0 && la >= 0.0 {
                            cands.push((mu, la));
                        }
                    }
                }
            }
            let ok = |&(mu, la): &(f64, f64)| {
                types.iter().all(|t| mu * t.cost + la * t.load >= t.return_rate * (1.0 - 1e-12) - 1e-12)
            };
            let mut best: Option<((f64, f64), f64)> = None;
            for c in cands.iter().filter(|c| ok(c)) {
                let v = c.0 * budget + c.1 * capacity;
                if best.map_or(true, |(_, bv)| v < bv - TIE_TOL * bv.abs().max(1.0)) {
                    best = Some((*c, v));
                }
            }
            best.map_or(cands[0], |(c, _)| c)
        }
    }
}

/// One composite unit split over types: `max Σαᵢrᵢ  s.t.  Σαᵢℓᵢ ≤ cap,
/// Σαᵢ = 1, α ≥ 0`. Vertices are pure types under the cap or two-type
/// mixes that exhaust it.
pub fn optimal_unit_mix(types: &[AgentTypeSpec], load_cap: f64) -> Result<Vec<f64>> {
    if !(load_cap > 0.0) {
        return config(format!("load cap must be positive, got {load_cap}"));
    }
    if types.is_empty() {
        return config("no agent types given");
    }
    let n = types.len();
    let min_load = types.iter().map(|t| t.load).fold(f64::INFINITY, f64::min);
    if min_load > load_cap {
        return Err(Error::Infeasible(format!(
            "smallest load {min_load} exceeds the load cap {load_cap}"
        )));
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut consider = |alpha: Vec<f64>| {
        let v: f64 = alpha.iter().zip(types).map(|(a, t)| a * t.return_rate).sum();
        if best.as_ref().map_or(true, |(_, bv)| v > bv + TIE_TOL * bv.abs().max(1.0)) {
            best = Some((alpha, v));
        }
    };
    for i in 0..n {
        if types[i].load <= load_cap {
            let mut a = vec![0.0; n];
            a[i] = 1.0;
            consider(a);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (types[i].load, types[j].load);
            if li < load_cap && lj > load_cap {
                let mut a = vec![0.0; n];
                a[j] = (load_cap - li) / (lj - li);
                a[i] = 1.0 - a[j];
                consider(a);
            }
        }
    }
    Ok(best.expect("a feasible pure type exists").0)
}

/// Constraint-role sparsity: at most `binding_constraints` positive entries.
pub fn sparsity_check(counts: &[f64], binding_constraints: usize) -> bool {
    counts.iter().filter(|&&n| n > SUPPORT_TOL).count() <= binding_constraints
}
