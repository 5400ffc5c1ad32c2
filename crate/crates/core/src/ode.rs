//! Fixed-step classical Runge-Kutta integration.

/// Scratch buffers for one RK4 step of an `n`-dimensional system.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(n: usize) -> Self {
        Rk4 {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            tmp: vec![0.0; n],
        }
    }

    /// Advances `x` from `t` to `t + h` in place. `field(t, x, dx)` writes the
    /// vector field into `dx`.
    pub fn step<F>(&mut self, field: &mut F, t: f64, x: &mut [f64], h: f64)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = x.len();
        debug_assert_eq!(n, self.k1.len());
        field(t, x, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * h * self.k1[i];
        }
        field(t + 0.5 * h, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = x[i] + 0.5 * h * self.k2[i];
        }
        field(t + 0.5 * h, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = x[i] + h * self.k3[i];
        }
        field(t + h, &self.tmp, &mut self.k4);
        for i in 0..n {
            x[i] += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Splits `[0, horizon]` into steps of at most `step`, the last one
/// shortened so the grid lands exactly on `horizon`.
pub(crate) fn step_schedule(horizon: f64, step: f64) -> impl Iterator<Item = (f64, f64)> {
    let n = if horizon <= 0.0 {
        0
    } else {
        (horizon / step - 1e-9).ceil().max(1.0) as usize
    };
    (0..n).map(move |i| {
        let t0 = i as f64 * step;
        let t1 = if i + 1 == n { horizon } else { (i + 1) as f64 * step };
        (t0, t1 - t0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_fourth_order() {
        let exact = (-1.0f64).exp();
        let mut errs = Vec::new();
        for &h in &[0.1, 0.05] {
            let mut x = vec![1.0];
            let mut rk = Rk4::new(1);
            let mut f = |_t: f64, x: &[f64], dx: &mut [f64]| dx[0] = -x[0];
            for (t, dt) in step_schedule(1.0, h) {
                rk.step(&mut f, t, &mut x, dt);
            }
            errs.push((x[0] - exact).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((order - 4.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn schedule_hits_horizon() {
        let steps: Vec<_> = step_schedule(1.05, 0.1).collect();
        assert_eq!(steps.len(), 11);
        let end: f64 = steps.last().map(|(t, dt)| t + dt).unwrap();
        assert!((end - 1.05).abs() < 1e-15);
        assert_eq!(step_schedule(0.0, 0.1).count(), 0);
        assert_eq!(step_schedule(1.0, 0.1).count(), 10);
    }
}
