use crate::error::{validation, Result};

const ROOT_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-12;
const SCAN_POINTS: usize = 10_000;

/// Local classification of the aligned vertex `x = 1` under
/// `ẋ = x(1 − x) g(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointStability {
    Stable,
    Unstable,
    /// `g(1) = 0` and `g'(1) = 0` within tolerance.
    NonHyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinReport {
    /// Largest zero of `g` on `[0, 1]`; 1 when `g` has no sign change.
    pub point_of_no_return: f64,
    pub x1: EndpointStability,
}

impl BasinReport {
    pub fn x1_stable(&self) -> bool {
        self.x1 == EndpointStability::Stable
    }
}

/// Locates the point of no return of `ẋ = x(1 − x) g(x)` and classifies
/// `x = 1`.
pub fn basin_analysis<G: Fn(f64) -> f64>(g: G) -> Result<BasinReport> {
    let g1 = g(1.0);
    if !g1.is_finite() {
        return validation("g(1) is not finite");
    }
    let x1 = if g1 > ZERO_TOL {
        EndpointStability::Stable
    } else if g1 < -ZERO_TOL {
        EndpointStability::Unstable
    } else {
        let h = 1e-5;
        let d = (3.0 * g(1.0) - 4.0 * g(1.0 - h) + g(1.0 - 2.0 * h)) / (2.0 * h);
        if d > 1e-7 {
            EndpointStability::Unstable
        } else if d < -1e-7 {
            EndpointStability::Stable
        } else {
            EndpointStability::NonHyperbolic
        }
    };
    if g1.abs() <= ZERO_TOL {
        return Ok(BasinReport { point_of_no_return: 1.0, x1 });
    }
    // scan downward from 1 for the last sign change
    let mut hi = 1.0;
    let mut g_hi = g1;
    for k in (0..SCAN_POINTS).rev() {
        let lo = k as f64 / SCAN_POINTS as f64;
        let g_lo = g(lo);
        if !g_lo.is_finite() {
            return validation(format!("g({lo}) is not finite"));
        }
        if g_lo.abs() <= ZERO_TOL {
            return Ok(BasinReport { point_of_no_return: lo, x1 });
        }
        if g_lo.signum() != g_hi.signum() {
            let root = bisect(&g, lo, hi, g_lo);
            return Ok(BasinReport { point_of_no_return: root, x1 });
        }
        hi = lo;
        g_hi = g_lo;
    }
    Ok(BasinReport { point_of_no_return: 1.0, x1 })
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let s_lo = g_lo.signum();
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let r = basin_analysis(|x| 0.5 - x).unwrap();
        assert!((r.point_of_no_return - 0.5).abs() < 1e-10);
        assert_eq!(r.x1, EndpointStability::Unstable);
    }

    #[test]
    fn zero_function_is_non_hyperbolic() {
        let r = basin_analysis(|_| 0.0).unwrap();
        assert_eq!(r.x1, EndpointStability::NonHyperbolic);
        assert!(!r.x1_stable());
    }

    #[test]
    fn quadratic_largest_root() {
        let g = |x: f64| (x - 0.3) * (0.8 - x);
        let r = basin_analysis(g).unwrap();
        // brute-force scan oracle
        let mut last = 0.0;
        let n = 1_000_000;
        for k in 0..n {
            let (a, b) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
            if g(a).signum() != g(b).signum() {
                last = a;
            }
        }
        assert!((r.point_of_no_return - last).abs() < 2e-6);
        assert!((r.point_of_no_return - 0.8).abs() < 1e-9);
        assert_eq!(r.x1, EndpointStability::Unstable);
    }

    #[test]
    fn positive_everywhere() {
        let r = basin_analysis(|x| 1.0 + x).unwrap();
        assert_eq!(r.point_of_no_return, 1.0);
        assert!(r.x1_stable());
    }

    #[test]
    fn tangent_zero_at_one() {
        // g(1) = 0, g'(1) = 1 > 0: unstable
        assert_eq!(basin_analysis(|x| x - 1.0).unwrap().x1, EndpointStability::Unstable);
        assert_eq!(basin_analysis(|x| 1.0 - x).unwrap().x1, EndpointStability::Stable);
    }
}
