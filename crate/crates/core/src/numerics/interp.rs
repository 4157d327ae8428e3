/// Piecewise cubic Hermite interpolant that preserves monotonicity of the
/// data (Fritsch–Carlson slope limiting).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Slopes estimated from the data.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        assert!(x.len() == y.len() && x.len() >= 2);
        let n = x.len();
        let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut d = vec![0.0; n];
        d[0] = secant[0];
        d[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
            d[i] = (h1 * secant[i - 1] + h0 * secant[i]) / (h0 + h1);
        }
        Self::with_slopes(x, y, d)
    }

    /// Uses the given nodal derivatives, limited only where they would break
    /// monotonicity of an interval.
    pub fn with_slopes(x: Vec<f64>, y: Vec<f64>, mut d: Vec<f64>) -> Self {
        assert!(x.len() == y.len() && x.len() == d.len() && x.len() >= 2);
        for i in 0..x.len() - 1 {
            let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            if delta == 0.0 {
                d[i] = 0.0;
                d[i + 1] = 0.0;
                continue;
            }
            if d[i] * delta < 0.0 {
                d[i] = 0.0;
            }
            if d[i + 1] * delta < 0.0 {
                d[i + 1] = 0.0;
            }
            let a = d[i] / delta;
            let b = d[i + 1] / delta;
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                d[i] = t * a * delta;
                d[i + 1] = t * b * delta;
            }
        }
        Self { x, y, d }
    }

    /// Plain cubic Hermite interpolant through the given slopes, for data
    /// that need not be monotone.
    pub fn hermite(x: Vec<f64>, y: Vec<f64>, d: Vec<f64>) -> Self {
        assert!(x.len() == y.len() && x.len() == d.len() && x.len() >= 2);
        Self { x, y, d }
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    fn locate(&self, t: f64) -> usize {
        let n = self.x.len();
        let k = self.x.partition_point(|&xi| xi <= t);
        k.saturating_sub(1).min(n - 2)
    }

    /// Value, first and second derivative at `t` (clamped to the node range).
    pub fn eval_all(&self, t: f64) -> (f64, f64, f64) {
        let t = t.clamp(self.x_min(), self.x_max());
        let i = self.locate(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.d[i] * h, self.d[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let dv = (6.0 * s2 - 6.0 * s) * y0 + (3.0 * s2 - 4.0 * s + 1.0) * m0 + (-6.0 * s2 + 6.0 * s) * y1 + (3.0 * s2 - 2.0 * s) * m1;
        let ddv = (12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1;
        (v, dv / h, ddv / (h * h))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_all(t).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hermite_with_exact_slopes_is_fourth_order() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..=n).map(|i| 5.0 * i as f64 / n as f64).collect();
            let y: Vec<f64> = x.iter().map(|t| (-t).exp()).collect();
            let d: Vec<f64> = x.iter().map(|t| -(-t).exp()).collect();
            let p = MonotoneCubic::with_slopes(x, y, d);
            (0..1000)
                .map(|k| {
                    let t = 5.0 * (k as f64 + 0.37) / 1000.0;
                    (p.eval(t) - (-t).exp()).abs()
                })
                .fold(0.0, f64::max)
        };
        let rate = (err(20) / err(40)).log2();
        assert!(rate > 3.8, "rate {rate}");
    }

    proptest! {
        #[test]
        fn preserves_monotone_data(steps in proptest::collection::vec(0.0f64..1.0, 3..30)) {
            let x: Vec<f64> = (0..steps.len()).map(|i| i as f64).collect();
            let mut acc = 0.0;
            let y: Vec<f64> = steps.iter().map(|s| { acc += s; acc }).collect();
            let p = MonotoneCubic::new(x.clone(), y);
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=(10 * (x.len() - 1)) {
                let v = p.eval(k as f64 / 10.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
