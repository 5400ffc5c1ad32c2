use crate::error::{validation, Result};

/// Bits above this saturate [`expected_persistence`] (`e^700` is near the
/// top of the f64 range).
pub const PERSISTENCE_SATURATION: f64 = 700.0;

/// `p = W / σ`.
pub fn protection_bits(barrier: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return validation(format!("noise intensity must be positive, got {sigma}"));
    }
    if !(barrier >= 0.0) {
        return validation(format!("barrier must be nonnegative, got {barrier}"));
    }
    Ok(barrier / sigma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Persistence {
    /// `e^p / λ`, capped at `e^700 / λ` when saturated.
    pub value: f64,
    pub saturated: bool,
}

/// Expected residence time `e^p / λ` for `p` protection bits and base
/// escape rate λ.
pub fn expected_persistence(bits: f64, base_rate: f64) -> Result<Persistence> {
    if !(base_rate > 0.0) {
        return validation(format!("base rate must be positive, got {base_rate}"));
    }
    let saturated = bits > PERSISTENCE_SATURATION;
    let p = bits.min(PERSISTENCE_SATURATION);
    Ok(Persistence { value: p.exp() / base_rate, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_in_barrier() {
        assert_eq!(protection_bits(0.0, 0.1).unwrap(), 0.0);
        assert!(protection_bits(1.0, 0.0).is_err());
        let p = protection_bits(0.7, 0.3).unwrap();
        // power-of-two scaling is exact in floating point
        assert_eq!(protection_bits(4.0 * 0.7, 0.3).unwrap(), 4.0 * p);
        assert!((protection_bits(3.0 * 0.7, 0.3).unwrap() - 3.0 * p).abs() <= 4.0 * f64::EPSILON * p);
    }

    #[test]
    fn persistence() {
        assert_eq!(expected_persistence(0.0, 1.0).unwrap().value, 1.0);
        let big = expected_persistence(800.0, 1.0).unwrap();
        assert!(big.saturated && big.value.is_finite());
        assert!(expected_persistence(1.0, 0.0).is_err());
    }
}
