//! Fitness models: linear payoff matrices or general frequency-dependent
//! maps.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{config, Error, Result};
use crate::frontier::FrontierPoint;
use crate::simplex::PopulationState;

pub type Matrix = DMatrix<f64>;

/// `f(x)` for a general model.
pub type FitnessFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// `J[j][k] = ∂f_j/∂x_k`.
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// Central finite-difference step used when no analytic Jacobian is given.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Clone)]
pub enum FitnessModel {
    /// `f(x) = Π x`.
    Linear { payoff: Matrix },
    General {
        dim: usize,
        fitness: FitnessFn,
        jacobian: Option<JacobianFn>,
        fd_step: f64,
    },
}

impl fmt::Debug for FitnessModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitnessModel::Linear { payoff } => f.debug_struct("Linear").field("payoff", payoff).finish(),
            FitnessModel::General { dim, jacobian, fd_step, .. } => f
                .debug_struct("General")
                .field("dim", dim)
                .field("analytic_jacobian", &jacobian.is_some())
                .field("fd_step", fd_step)
                .finish(),
        }
    }
}

impl FitnessModel {
    pub fn linear(payoff: Matrix) -> Result<Self> {
        if payoff.nrows() != payoff.ncols() {
            return config(format!(
                "payoff matrix must be square, got {}x{}",
                payoff.nrows(),
                payoff.ncols()
            ));
        }
        if payoff.nrows() == 0 {
            return config("payoff matrix is empty");
        }
        if payoff.iter().any(|v| !v.is_finite()) {
            return config("payoff matrix has non-finite entries");
        }
        Ok(FitnessModel::Linear { payoff })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return config("payoff rows must form a square matrix");
        }
        Self::linear(Matrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn general<F>(dim: usize, fitness: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        FitnessModel::General {
            dim,
            fitness: Arc::new(fitness),
            jacobian: None,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// Attaches an analytic Jacobian to a general model. No effect on
    /// linear models.
    pub fn with_jacobian<J>(self, jac: J) -> Self
    where
        J: Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    {
        match self {
            FitnessModel::General { dim, fitness, fd_step, .. } => FitnessModel::General {
                dim,
                fitness,
                jacobian: Some(Arc::new(jac)),
                fd_step,
            },
            other => other,
        }
    }

    /// Frequency-independent fitness `f_i = values[i]`.
    pub fn constant(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::linear(Matrix::from_fn(n, n, |i, _| values[i]))
    }

    /// Two-type coordination game `diag(a, b)`.
    pub fn coordination(a: f64, b: f64) -> Self {
        FitnessModel::Linear {
            payoff: Matrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b]),
        }
    }

    /// Standard Rock-Paper-Scissors.
    pub fn rps() -> Self {
        FitnessModel::Linear {
            payoff: Matrix::from_row_slice(3, 3, &[0.0, -1.0, 1.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0]),
        }
    }

    /// Congestion-priced ROC fitness `f_i(x) = b_i - κ a_i (a · x)`: return
    /// per cost minus a capacity price proportional to the mean load.
    pub fn roc_congestion(points: &[FrontierPoint], congestion: f64) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return config("no frontier points");
        }
        Self::linear(Matrix::from_fn(n, n, |i, j| {
            points[i].return_per_cost - congestion * points[i].load_per_cost * points[j].load_per_cost
        }))
    }

    pub fn dim(&self) -> usize {
        match self {
            FitnessModel::Linear { payoff } => payoff.nrows(),
            FitnessModel::General { dim, .. } => *dim,
        }
    }

    pub fn payoff(&self) -> Option<&Matrix> {
        match self {
            FitnessModel::Linear { payoff } => Some(payoff),
            FitnessModel::General { .. } => None,
        }
    }

    pub fn require_linear(&self) -> Result<&Matrix> {
        self.payoff()
            .ok_or_else(|| Error::Config("operation requires a linear payoff model".into()))
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return config(format!("dimension mismatch: model has {} types, state has {n}", self.dim()));
        }
        Ok(())
    }

    /// Writes `f(x)` into `out` without validation; the hot path for
    /// integrators.
    pub fn fitness_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            FitnessModel::Linear { payoff } => {
                let n = x.len();
                for (i, o) in out.iter_mut().enumerate().take(n) {
                    let mut s = 0.0;
                    for (j, xj) in x.iter().enumerate() {
                        s += payoff[(i, j)] * xj;
                    }
                    *o = s;
                }
            }
            FitnessModel::General { fitness, .. } => {
                let f = fitness(x);
                out.copy_from_slice(&f[..out.len()]);
            }
        }
    }

    pub fn fitness_raw(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.fitness_into(x, &mut out);
        out
    }

    /// Fitness at a simplex point, checking dimension and finiteness.
    pub fn fitness(&self, state: &PopulationState) -> Result<Vec<f64>> {
        self.check_dim(state.dim())?;
        let f = match self {
            FitnessModel::General { fitness, dim, .. } => {
                let f = fitness(state.shares());
                if f.len() != *dim {
                    return config(format!("fitness callback returned {} values, expected {dim}", f.len()));
                }
                f
            }
            _ => self.fitness_raw(state.shares()),
        };
        if let Some(v) = f.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite fitness value {v}")));
        }
        Ok(f)
    }

    /// `J[j][k] = ∂f_j/∂x_k`, analytic when available, otherwise by central
    /// differences in the ambient coordinates.
    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match self {
            FitnessModel::Linear { payoff } => (0..payoff.nrows())
                .map(|i| (0..payoff.ncols()).map(|j| payoff[(i, j)]).collect())
                .collect(),
            FitnessModel::General { jacobian: Some(jac), .. } => jac(x),
            FitnessModel::General { dim, fitness, fd_step, .. } => {
                let n = *dim;
                let mut jac = vec![vec![0.0; n]; n];
                let mut xp = x.to_vec();
                for k in 0..n {
                    let orig = xp[k];
                    xp[k] = orig + fd_step;
                    let fp = fitness(&xp);
                    xp[k] = orig - fd_step;
                    let fm = fitness(&xp);
                    xp[k] = orig;
                    for j in 0..n {
                        jac[j][k] = (fp[j] - fm[j]) / (2.0 * fd_step);
                    }
                }
                jac
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_jacobian_matches_linear() {
        let lin = FitnessModel::rps();
        let p = lin.payoff().unwrap().clone();
        let gen = FitnessModel::general(3, move |x| (&p * nalgebra::DVector::from_column_slice(x)).iter().copied().collect());
        let x = [0.2, 0.3, 0.5];
        let a = lin.jacobian(&x);
        let b = gen.jacobian(&x);
        for j in 0..3 {
            for k in 0..3 {
                assert!((a[j][k] - b[j][k]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_config_error() {
        let m = FitnessModel::coordination(2.0, 1.0);
        let s = PopulationState::uniform(3).unwrap();
        assert!(matches!(m.fitness(&s), Err(Error::Config(_))));
        assert!(FitnessModel::from_rows(&[vec![1.0, 2.0]]).is_err());
    }
}
