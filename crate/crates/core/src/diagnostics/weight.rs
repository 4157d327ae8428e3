use serde::Serialize;

use crate::model::Parameters;

/// Convective weight `eta(x3) = exp((delta/mu^2)(1 - e^{-mu x3/eps}))`.
///
/// It increases from 1 at the wall to `e^{delta/mu^2}` and its derivative
/// is concentrated in the layer, where it dominates `delta/eps e^{-gamma0 x3/eps}`
/// as soon as `mu <= gamma0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightFn {
    pub delta: f64,
    pub mu: f64,
    pub eps: f64,
}

impl WeightFn {
    pub fn new(delta: f64, mu: f64, eps: f64) -> Self {
        Self { delta, mu, eps }
    }

    pub fn from_params(p: &Parameters) -> Self {
        Self::new(p.bl_amplitude, p.weight_mu, p.epsilon)
    }

    /// Value at infinity, `e^{delta/mu^2}`.
    pub fn sup(&self) -> f64 {
        (self.delta / (self.mu * self.mu)).exp()
    }

    /// `(eta, eta', eta'')` at `x3`.
    pub fn eval_all(&self, x3: f64) -> (f64, f64, f64) {
        let decay = (-self.mu * x3 / self.eps).exp();
        let eta = (self.delta / (self.mu * self.mu) * -(-self.mu * x3 / self.eps).exp_m1()).exp();
        let rate = self.delta / (self.mu * self.eps) * decay;
        let d1 = rate * eta;
        let d2 = d1 * (rate - self.mu / self.eps);
        (eta, d1, d2)
    }
}

/// `(eta, eta')` at `x3 >= 0`.
pub fn eval_weight(w: &WeightFn, x3: f64) -> (f64, f64) {
    let (eta, d1, _) = w.eval_all(x3);
    (eta, d1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(w: &WeightFn) -> impl Iterator<Item = f64> + '_ {
        (0..=4000).map(move |k| 40.0 * w.eps / w.mu * k as f64 / 4000.0)
    }

    #[test]
    fn wall_and_infinity() {
        let w = WeightFn::new(0.05, 0.75, 0.01);
        assert_eq!(eval_weight(&w, 0.0).0, 1.0);
        assert!((eval_weight(&w, 10.0).0 - w.sup()).abs() < 1e-14);
        assert!((w.sup() - (0.05f64 / 0.5625).exp()).abs() < 1e-15);
    }

    #[test]
    fn derivative_identity() {
        for eps in [0.02, 0.01, 0.0025] {
            let w = WeightFn::new(0.05, 0.75, eps);
            for x in scan(&w) {
                let (eta, d1) = eval_weight(&w, x);
                let expect = w.delta / (w.mu * eps) * (-w.mu * x / eps).exp() * eta;
                assert!((d1 - expect).abs() <= 1e-12 * expect.max(1.0));
                let h = 1e-6 * eps;
                if x > h {
                    let fd = (eval_weight(&w, x + h).0 - eval_weight(&w, x - h).0) / (2.0 * h);
                    assert!((fd - d1).abs() < 1e-6 * (1.0 + d1));
                }
            }
        }
    }

    #[test]
    fn bounds_for_small_ratio() {
        let w = WeightFn::new(1e-4, 0.1, 0.01);
        let mut sup_eta: f64 = 0.0;
        let mut sup_x: f64 = 0.0;
        for x in scan(&w) {
            let (eta, d1) = eval_weight(&w, x);
            assert!(eta >= 0.5);
            sup_eta = sup_eta.max(eta);
            sup_x = sup_x.max(x * d1);
        }
        assert!(sup_eta <= 0.01f64.exp() && sup_eta < 2.0);
        assert!(sup_x <= 4.0);
    }

    #[test]
    fn weight_derivative_absorbs_layer_terms() {
        let (delta, gamma0) = (0.05, 0.8165);
        for mu in [0.25, 0.5, 0.75, gamma0] {
            let w = WeightFn::new(delta, mu, 0.01);
            for x in scan(&w) {
                let (eta, d1, d2) = w.eval_all(x);
                let layer = eta * delta / w.eps * (-gamma0 * x / w.eps).exp();
                assert!(layer <= mu * d1 * (1.0 + 1e-12));
                let bound = (1.0 + delta / (mu * mu)) * mu / w.eps * d1;
                assert!(d2.abs() <= bound * (1.0 + 1e-12));
            }
        }
    }
}
