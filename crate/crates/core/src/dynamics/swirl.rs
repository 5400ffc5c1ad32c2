use crate::error::{config, Result};
use crate::fitness::Matrix;

/// `‖W‖_F / ‖S‖_F`, or `Undefined` for a pure-swirl matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SwirlRatio {
    Value(f64),
    Undefined,
}

impl SwirlRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            SwirlRatio::Value(v) => Some(v),
            SwirlRatio::Undefined => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwirlReport {
    pub symmetric_part: Matrix,
    pub antisymmetric_part: Matrix,
    pub swirl_ratio: SwirlRatio,
}

/// Splits a payoff matrix into its symmetric (potential) and antisymmetric
/// (swirl) parts.
pub fn swirl_decompose(payoff: &Matrix) -> Result<SwirlReport> {
    if payoff.nrows() != payoff.ncols() {
        return config("swirl decomposition needs a square matrix");
    }
    let n = payoff.nrows();
    let mut s = Matrix::zeros(n, n);
    let mut w = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = 0.5 * (payoff[(i, j)] + payoff[(j, i)]);
        }
        for j in (i + 1)..n {
            let v = 0.5 * (payoff[(i, j)] - payoff[(j, i)]);
            w[(i, j)] = v;
            w[(j, i)] = -v;
        }
    }
    let s_norm = s.norm();
    let ratio = if s_norm == 0.0 {
        SwirlRatio::Undefined
    } else {
        SwirlRatio::Value(w.norm() / s_norm)
    };
    Ok(SwirlReport { symmetric_part: s, antisymmetric_part: w, swirl_ratio: ratio })
}
