use crate::error::{config, Result};
use crate::fitness::FitnessModel;
use crate::simplex::for_each_grid_point;

/// Witness search result for uniform domination of one type.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub dominated: bool,
    /// Mixture weights over all types (zero on the candidate).
    pub dominating_mixture: Option<Vec<f64>>,
    /// `min_x [Σ α_k f_k(x) − f_d(x)]` for the best mixture found.
    pub margin: f64,
}

/// Searches a regular grid of mixtures over the other types for one whose
/// fitness beats `candidate` at every point of the state grid.
///
/// For a linear model the gap `Σ α_k f_k(x) − f_d(x)` is linear in `x`, so
/// its minimum over the state grid is attained at a simplex vertex; the
/// search evaluates the vertices only.
pub fn detect_domination(
    model: &FitnessModel,
    candidate: usize,
    grid_resolution: usize,
) -> Result<DominationReport> {
    let payoff = model.require_linear()?;
    if grid_resolution < 2 {
        return config(format!("grid resolution must be at least 2, got {grid_resolution}"));
    }
    let n = payoff.nrows();
    if candidate >= n {
        return config(format!("candidate {candidate} out of range for {n} types"));
    }
    if n == 1 {
        return Ok(DominationReport { dominated: false, dominating_mixture: None, margin: f64::NEG_INFINITY });
    }
    let others: Vec<usize> = (0..n).filter(|&k| k != candidate).collect();
    // gap[k][j] = Π_kj − Π_dj
    let gap: Vec<Vec<f64>> = others
        .iter()
        .map(|&k| (0..n).map(|j| payoff[(k, j)] - payoff[(candidate, j)]).collect())
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_alpha = Vec::new();
    for_each_grid_point(others.len(), grid_resolution, |alpha| {
        let worst = (0..n)
            .map(|j| alpha.iter().zip(&gap).map(|(a, g)| a * g[j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if worst > best {
            best = worst;
            best_alpha = alpha.to_vec();
        }
    });
    let dominated = best > 1e-12;
    let mixture = dominated.then(|| {
        let mut full = vec![0.0; n];
        for (a, &k) in best_alpha.iter().zip(&others) {
            full[k] = *a;
        }
        full
    });
    Ok(DominationReport { dominated, dominating_mixture: mixture, margin: best })
}
