/// Double well with attractors at ±1 and a saddle at 0, parameterized by
/// the escape barriers in protection-bit units.
///
/// With increments `√(σΔt)·ξ` the diffusion coefficient is σ/2, so mean
/// escape times grow like `exp(2ΔV/σ)`; a barrier `W` therefore needs a
/// potential drop `ΔV = W/2`. Each side is `V(x) = −(W/2)(2x² − x⁴)`, which
/// for equal barriers is `(W/2)(x² − 1)² ` up to a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWell {
    /// Barrier seen from the well at −1.
    pub left_barrier: f64,
    /// Barrier seen from the well at +1.
    pub right_barrier: f64,
}

impl DoubleWell {
    pub fn symmetric(barrier: f64) -> Self {
        DoubleWell { left_barrier: barrier, right_barrier: barrier }
    }

    fn side(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left_barrier
        } else {
            self.right_barrier
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        -0.5 * self.side(x) * (2.0 * x * x - x.powi(4))
    }

    /// `−V′(x)`.
    pub fn drift(&self, x: f64) -> f64 {
        2.0 * self.side(x) * (x - x * x * x)
    }
}
