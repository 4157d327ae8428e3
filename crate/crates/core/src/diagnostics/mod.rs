//! Computable certificates for the stability analysis: the convective
//! weight, Sylvester minors of the quadratic forms of the energy estimates,
//! the weighted energy, `H^m_eps` norms and decay-rate fits.

mod energy;
mod forms;
mod weight;

pub use energy::{h0, h1, weighted_energy_a, HChoice};
pub use forms::{
    form_report, leading_minors, minors_ma, minors_ma_closed_form, minors_other, smallest_eigenvalue, worst_over, FormKind, Location,
    QuadraticFormReport, StabilityTrace,
};
pub use weight::{eval_weight, WeightFn};

use crate::error::{Error, Result};
use crate::numerics::{fd, fit};

/// `sum_{k <= m} eps^k ||d^k f||_{L2}` for samples on uniform nodes of
/// spacing `h`; derivatives by fourth-order differences, integrals by the
/// trapezoidal rule.
pub fn hm_eps_norm(values: &[f64], h: f64, eps: f64, m: usize) -> Result<f64> {
    if m > 3 {
        return Err(Error::InvalidParameter { name: "m", reason: "orders above 3 are not supported".into() });
    }
    if values.len() < 7 {
        return Err(Error::InvalidMesh("need at least 7 samples".into()));
    }
    let l2 = |v: &[f64]| {
        let last = v.len() - 1;
        let s: f64 = v.iter().map(|x| x * x).sum::<f64>() - 0.5 * (v[0] * v[0] + v[last] * v[last]);
        (s * h).sqrt()
    };
    let mut total = l2(values);
    for k in 1..=m {
        total += eps.powi(k as i32) * l2(&fd::derivative(values, h, k, 4));
    }
    Ok(total)
}

/// Least-squares slope of `-ln |f|` against `z` over `[z_lo, z_hi]`.
///
/// Fails with [`Error::WindowTooNoisy`] when the rms residual of the fit
/// exceeds 0.1 or the samples do not decay.
pub fn measure_decay(z: &[f64], values: &[f64], z_lo: f64, z_hi: f64) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        z.iter().zip(values).filter(|(z, _)| **z >= z_lo && **z <= z_hi).map(|(z, v)| (*z, v.abs().ln())).unzip();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::DomainError { value: 0.0, reason: "decay window contains a zero sample" });
    }
    let f = fit::linear_fit(&xs, &ys)?;
    let (rate, rms) = (-f.slope, f.rms_residual());
    if rms > 0.1 || !(rate > 1e-12) {
        return Err(Error::WindowTooNoisy { rms, rate });
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(a: f64, b: f64, count: usize) -> Vec<f64> {
        (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect()
    }

    #[test]
    fn pure_exponential_rate() {
        let z = nodes(0.0, 40.0, 401);
        let v: Vec<f64> = z.iter().map(|z| (-0.5 * z).exp()).collect();
        assert!((measure_decay(&z, &v, 5.0, 30.0).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn polynomially_tempered_exponential() {
        let z = nodes(0.0, 40.0, 401);
        let v: Vec<f64> = z.iter().map(|z| (1.0 + z) * (-0.5 * z).exp()).collect();
        let rate = measure_decay(&z, &v, 20.0, 40.0).unwrap();
        assert!((rate - 0.467_031_450_929_556_6).abs() < 1e-6, "{rate}");
    }

    #[test]
    fn constant_profile_is_rejected() {
        let z = nodes(0.0, 10.0, 101);
        let v = vec![0.3; 101];
        assert!(matches!(measure_decay(&z, &v, 2.0, 8.0), Err(Error::WindowTooNoisy { .. })));
    }

    #[test]
    fn hm_norm_of_sine() {
        let count = 20001;
        let h = 2.0 * std::f64::consts::PI / (count - 1) as f64;
        let f: Vec<f64> = (0..count).map(|k| (k as f64 * h).sin()).collect();
        let pi_sqrt = std::f64::consts::PI.sqrt();
        assert!((hm_eps_norm(&f, h, 0.1, 0).unwrap() - pi_sqrt).abs() < 1e-9);
        assert!((hm_eps_norm(&f, h, 0.1, 1).unwrap() - 1.1 * pi_sqrt).abs() < 1e-9);
    }

    #[test]
    fn eps_derivatives_are_order_one_on_a_layer() {
        let eps = 0.01;
        let h = eps / 200.0;
        let f: Vec<f64> = (0..20001).map(|k| (-(k as f64) * h / eps).exp()).collect();
        let l2 = hm_eps_norm(&f, h, eps, 0).unwrap();
        let mut prev = l2;
        for m in 1..=3 {
            let total = hm_eps_norm(&f, h, eps, m).unwrap();
            // each term is ||f|| = sqrt(eps/2)
            assert!(((total - prev) / l2 - 1.0).abs() < 1e-3, "m = {m}");
            prev = total;
        }
        assert!((l2 - (eps / 2.0).sqrt()).abs() < 1e-6);
    }
}
