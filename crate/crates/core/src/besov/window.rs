/// Smooth dyadic window `w` with `supp w ⊂ [1/2, 2]` and
/// `w(t) = 1 - w(t/2)` on `[1, 2]`.
///
/// Built from the transition `phi(x) = s(x) / (s(x) + s(1 - x))`,
/// `s(x) = exp(-1/x)`: `w(t) = phi(2t - 1)` on `[1/2, 1]` and
/// `w(t) = 1 - phi(t - 1)` on `[1, 2]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct WindowFunction;

pub fn make_window() -> WindowFunction {
    WindowFunction
}

fn transition(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

impl WindowFunction {
    pub fn eval(&self, t: f64) -> f64 {
        if !(0.5..=2.0).contains(&t) {
            0.0
        } else if t <= 1.0 {
            transition(2.0 * t - 1.0)
        } else {
            1.0 - transition(t - 1.0)
        }
    }

    /// Weight of frequency radius `r` in the zeroth dyadic piece: 1 on the
    /// closed unit ball, `w(r)` on `1 < r < 2`, 0 beyond. This is exactly
    /// `1 - sum_{n>=1} w(r / 2^n)`, so the pieces reconstruct the input.
    pub fn base_weight(&self, r: f64) -> f64 {
        if r <= 1.0 {
            1.0
        } else if r < 2.0 {
            self.eval(r)
        } else {
            0.0
        }
    }

    /// Weight of frequency radius `r` in piece `n >= 0`.
    pub fn piece_weight(&self, n: u32, r: f64) -> f64 {
        if n == 0 {
            self.base_weight(r)
        } else {
            self.eval(r / f64::powi(2.0, n as i32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        let w = make_window();
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(2.0), 0.0);
        assert_eq!(w.eval(1.0), 1.0);
        assert_eq!(w.eval(1.0) + w.eval(2.0), 1.0);
        assert!((w.eval(1.3) + w.eval(0.65) - 1.0).abs() < 1e-15);
        assert_eq!(w.eval(0.3), 0.0);
        assert_eq!(w.eval(-1.0), 0.0);
    }

    #[test]
    fn complementary_identity_on_grid() {
        let w = make_window();
        for k in 0..=10_000 {
            let t = 1.0 + k as f64 / 10_000.0;
            assert!((w.eval(t) - (1.0 - w.eval(t / 2.0))).abs() <= 1e-12);
            let v = w.eval(t / 2.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn partition_of_unity() {
        let w = make_window();
        for k in 0..=6000 {
            let t = 10f64.powf(-3.0 + k as f64 / 1000.0);
            let s: f64 = (-20..=20).map(|n| w.eval(t / 2f64.powi(n))).sum();
            assert!((s - 1.0).abs() <= 1e-12, "t = {t}");
        }
    }

    #[test]
    fn base_weight_completes_pieces() {
        let w = make_window();
        for r in [0.0, 1.0, 2f64.sqrt(), 3f64.sqrt(), 1.99, 2.0, 5.0, 17.3] {
            let s: f64 = (0..12).map(|n| w.piece_weight(n, r)).sum();
            assert!((s - 1.0).abs() <= 1e-15, "r = {r}");
        }
    }
}
