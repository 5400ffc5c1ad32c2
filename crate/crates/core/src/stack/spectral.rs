use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{validation, Error, Result};
use crate::fitness::Matrix;

pub const SPECTRAL_TOL: f64 = 1e-12;
pub const SPECTRAL_MAX_ITER: usize = 100_000;

/// Largest row sum; an upper bound on the spectral radius of a
/// nonnegative matrix.
pub fn gershgorin_bound(m: &Matrix) -> f64 {
    m.row_iter().map(|r| r.sum()).fold(0.0, f64::max)
}

/// Spectral radius of a nonnegative square matrix.
///
/// The matrix is split into strongly connected blocks (the radius is the
/// largest block radius). Each irreducible block is shifted by `ε·I`,
/// which makes it primitive, and power-iterated until the Collatz–Wielandt
/// bounds `min (Bx)ᵢ/xᵢ ≤ ρ(B) ≤ max (Bx)ᵢ/xᵢ` meet.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    let n = m.nrows();
    if m.ncols() != n {
        return validation(format!("matrix must be square, got {}x{}", n, m.ncols()));
    }
    if m.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return validation("spectral radius needs finite nonnegative entries");
    }
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut rho: f64 = 0.0;
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let r = if idx.len() == 1 {
            m[(idx[0], idx[0])]
        } else {
            irreducible_radius(&Matrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]))?
        };
        rho = rho.max(r);
    }
    Ok(rho)
}

fn irreducible_radius(a: &Matrix) -> Result<f64> {
    let n = a.nrows();
    let shift = 0.5 * gershgorin_bound(a);
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    for _ in 0..SPECTRAL_MAX_ITER {
        for i in 0..n {
            y[i] = shift * x[i] + (0..n).map(|j| a[(i, j)] * x[j]).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        if hi - lo <= SPECTRAL_TOL * hi.max(1.0) {
            return Ok((0.5 * (lo + hi) - shift).max(0.0));
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for i in 0..n {
            x[i] = y[i] / norm;
        }
    }
    Err(Error::NonConvergence { iterations: SPECTRAL_MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antidiagonal_closed_form() {
        let m = Matrix::from_row_slice(2, 2, &[0.0, 0.04, 0.09, 0.0]);
        assert!((spectral_radius(&m).unwrap() - 0.06).abs() < 1e-12);
    }

    #[test]
    fn zero_and_triangular() {
        assert_eq!(spectral_radius(&Matrix::zeros(3, 3)).unwrap(), 0.0);
        // reducible: radius is the largest diagonal block radius
        let m = Matrix::from_row_slice(3, 3, &[0.0, 5.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(spectral_radius(&m).unwrap(), 0.0);
    }

    #[test]
    fn matches_dense_eigenvalues() {
        let m = Matrix::from_row_slice(3, 3, &[0.0, 0.3, 0.1, 0.2, 0.0, 0.4, 0.5, 0.1, 0.0]);
        let dense = m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((spectral_radius(&m).unwrap() - dense).abs() < 1e-11);
    }

    #[test]
    fn rejects_negative_entries() {
        let m = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(spectral_radius(&m).is_err());
    }
}
