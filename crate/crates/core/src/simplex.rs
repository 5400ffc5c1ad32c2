//! Points on the probability simplex.

use crate::error::{validation, Error, Result};

/// Shares below this value are treated as extinct.
pub const DEFAULT_EXTINCTION_THRESHOLD: f64 = 1e-15;

/// A population state: nonnegative type frequencies summing to one.
///
/// The support is the set of indices whose share exceeds the extinction
/// threshold; shares at or below the threshold are stored as exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    shares: Vec<f64>,
    threshold: f64,
}

impl PopulationState {
    /// Builds a state from shares that already sum to one (within 1e-9).
    pub fn new(shares: Vec<f64>) -> Result<Self> {
        Self::with_threshold(shares, DEFAULT_EXTINCTION_THRESHOLD)
    }

    pub fn with_threshold(shares: Vec<f64>, threshold: f64) -> Result<Self> {
        if !(threshold >= 0.0 && threshold < 1.0) {
            return validation(format!("extinction threshold {threshold} outside [0, 1)"));
        }
        check_entries(&shares)?;
        let sum: f64 = shares.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return validation(format!("shares sum to {sum}, expected 1"));
        }
        let mut state = PopulationState { shares, threshold };
        state.renormalize()?;
        Ok(state)
    }

    /// Normalizes arbitrary nonnegative weights onto the simplex.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        check_entries(&weights)?;
        let mut state = PopulationState {
            shares: weights,
            threshold: DEFAULT_EXTINCTION_THRESHOLD,
        };
        state.renormalize()?;
        Ok(state)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return validation("state dimension must be positive");
        }
        Self::from_weights(vec![1.0; n])
    }

    /// The vertex `e_i` of the `n`-type simplex.
    pub fn vertex(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return validation(format!("vertex index {i} out of range for {n} types"));
        }
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        Self::from_weights(w)
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    pub fn into_shares(self) -> Vec<f64> {
        self.shares
    }

    pub fn dim(&self) -> usize {
        self.shares.len()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn support(&self) -> Vec<usize> {
        self.shares
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > self.threshold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Replaces the shares with `raw`, clamping and renormalizing.
    pub(crate) fn set_from_raw(&mut self, raw: &[f64]) -> Result<()> {
        self.shares.clear();
        self.shares.extend_from_slice(raw);
        self.renormalize()
    }

    fn renormalize(&mut self) -> Result<()> {
        renormalize_in_place(&mut self.shares, self.threshold)
    }
}

/// Clamps entries at or below `threshold` (and negatives) to zero and
/// rescales the rest to sum to one.
pub fn renormalize_in_place(shares: &mut [f64], threshold: f64) -> Result<()> {
    let mut sum = 0.0;
    for s in shares.iter_mut() {
        if !s.is_finite() {
            return Err(Error::Numerical(format!("non-finite share {s}")));
        }
        if *s <= threshold {
            *s = 0.0;
        }
        sum += *s;
    }
    if sum <= 0.0 {
        return Err(Error::Numerical("all shares vanished".into()));
    }
    for s in shares.iter_mut() {
        *s /= sum;
    }
    Ok(())
}

fn check_entries(shares: &[f64]) -> Result<()> {
    if shares.is_empty() {
        return validation("state dimension must be positive");
    }
    for (i, &s) in shares.iter().enumerate() {
        if !s.is_finite() || s < 0.0 {
            return validation(format!("share {i} = {s} is not a nonnegative finite number"));
        }
    }
    Ok(())
}

/// Enumerates all points of the regular simplex grid with `resolution`
/// subdivisions per edge, calling `visit` with each point.
pub fn for_each_grid_point<F: FnMut(&[f64])>(dim: usize, resolution: usize, mut visit: F) {
    if dim == 0 {
        return;
    }
    let mut counts = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    fn rec<F: FnMut(&[f64])>(
        i: usize,
        remaining: usize,
        res: usize,
        counts: &mut [usize],
        point: &mut [f64],
        visit: &mut F,
    ) {
        let dim = counts.len();
        if i + 1 == dim {
            counts[i] = remaining;
            for (p, &c) in point.iter_mut().zip(counts.iter()) {
                *p = c as f64 / res as f64;
            }
            visit(point);
            return;
        }
        for c in 0..=remaining {
            counts[i] = c;
            rec(i + 1, remaining - c, res, counts, point, visit);
        }
    }
    rec(0, resolution, resolution.max(1), &mut counts, &mut point, &mut visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_tracks_threshold() {
        let s = PopulationState::with_threshold(vec![0.5, 0.5 - 1e-13, 1e-13], 1e-12).unwrap();
        assert_eq!(s.support(), vec![0, 1]);
        assert_eq!(s.shares()[2], 0.0);
        assert!((s.shares().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PopulationState::new(vec![0.5, 0.6]).is_err());
        assert!(PopulationState::new(vec![1.5, -0.5]).is_err());
        assert!(PopulationState::new(vec![]).is_err());
        assert!(PopulationState::from_weights(vec![0.0, 0.0]).is_err());
        assert!(PopulationState::vertex(2, 2).is_err());
    }

    #[test]
    fn grid_point_count() {
        let mut n = 0;
        for_each_grid_point(3, 4, |p| {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            n += 1;
        });
        // C(4 + 2, 2)
        assert_eq!(n, 15);
    }
}
