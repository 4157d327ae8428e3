//! Boundary-layer hierarchy of the supersonic (Bohm) regime.
//!
//! At leading order the stretched potential `Phi0(z)`, `z = x3 / eps`,
//! solves the autonomous ODE `Phi0'' = X(Phi0)` with
//! `X(Phi) = n0 (F^{-1}(Phi) - e^{-Phi})` and
//!
//! ```text
//! F(N) = u^2 / (2 N^2) + Ti ln N - u^2 / 2,
//! ```
//!
//! where `n0`, `u` are the wall traces of the quasineutral density and
//! normal velocity. `F` is decreasing on `(0, N_F)`, `N_F = |u| / sqrt(Ti)`,
//! so its inverse maps `(Phi_F, +inf)` onto `(0, N_F)`. The first
//! corrector solves the linearised problem `Phi1'' = X'(Phi0) Phi1 + F6`.

mod corrector;
mod profile;

pub use corrector::{assemble_f6, solve_phi1, CorrectorSources, RegularTrace, ALPHA_COERCIVITY};
pub use profile::{admissible_window, build_layer_fields, solve_phi0, solve_phi0_with, AdmissibleWindow, ProfileOptions, SheathProfile};

use crate::error::{Error, Result};
use crate::numerics::quadrature;

/// Potentials closer than this to `Phi_F` are rejected by [`LayerContext::invert_f`]:
/// `F'` vanishes at `N_F` and the inverse loses all precision there.
pub const PHI_F_GUARD: f64 = 1e-5;

/// Wall traces that parametrise the layer ODE at one `(t, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerContext {
    pub n0_trace: f64,
    pub u3_trace: f64,
    pub ti: f64,
    pub phi0_boundary_value: f64,
}

impl LayerContext {
    /// Checks `n0 > 0`, `u < 0` and the Bohm condition `u^2 > Ti + 1`.
    pub fn new(n0_trace: f64, u3_trace: f64, ti: f64, phi0_boundary_value: f64) -> Result<Self> {
        if !(n0_trace > 0.0) {
            return Err(Error::InvalidParameter { name: "n0_trace", reason: "must be > 0".into() });
        }
        if !(ti > 0.0) {
            return Err(Error::InvalidParameter { name: "ti", reason: "must be > 0".into() });
        }
        if !phi0_boundary_value.is_finite() {
            return Err(Error::InvalidParameter { name: "phi0_boundary_value", reason: "must be finite".into() });
        }
        if !(u3_trace < 0.0) || u3_trace * u3_trace <= ti + 1.0 {
            return Err(Error::BohmViolation { u3_sq: u3_trace * u3_trace, threshold: ti + 1.0 });
        }
        Ok(Self { n0_trace, u3_trace, ti, phi0_boundary_value })
    }

    /// Context for the wall potential `phi_b` over the quasineutral traces:
    /// `Phi0(0) = phi_b + ln n0`.
    pub fn from_traces(n0_trace: f64, u3_trace: f64, ti: f64, phi_b: f64) -> Result<Self> {
        Self::new(n0_trace, u3_trace, ti, phi_b + n0_trace.ln())
    }

    fn u2(&self) -> f64 {
        self.u3_trace * self.u3_trace
    }

    /// `N_F = sqrt(u^2 / Ti)`, the end of the monotonicity interval of `F`.
    pub fn n_f(&self) -> f64 {
        (self.u2() / self.ti).sqrt()
    }

    /// `Phi_F = F(N_F) < 0`.
    pub fn phi_f(&self) -> f64 {
        self.f_offset(self.n_f() - 1.0)
    }

    /// `F` written in the offset `m = N - 1`, which keeps relative accuracy
    /// for small potentials.
    fn f_offset(&self, m: f64) -> f64 {
        let n = 1.0 + m;
        -0.5 * self.u2() * m * (2.0 + m) / (n * n) + self.ti * m.ln_1p()
    }

    pub fn eval_f(&self, n: f64) -> Result<f64> {
        if !(n > 0.0) {
            return Err(Error::DomainError { value: n, reason: "F is defined for N > 0" });
        }
        Ok(self.f_offset(n - 1.0))
    }

    /// `dF/dN`.
    pub fn f_prime(&self, n: f64) -> f64 {
        -self.u2() / (n * n * n) + self.ti / n
    }

    /// `F^{-1}(Phi) - 1`, the relative density deviation in the layer.
    pub fn invert_f_offset(&self, phi: f64) -> Result<f64> {
        let phi_f = self.phi_f();
        if !phi.is_finite() || phi <= phi_f + PHI_F_GUARD {
            return Err(Error::OutOfRange { phi, phi_f });
        }
        if phi == 0.0 {
            return Ok(0.0);
        }
        // Bracket [lo, hi] in m with F(lo) > phi > F(hi).
        let mut hi = self.n_f() - 1.0;
        let mut lo = 0.0;
        if phi < 0.0 {
            // root in (0, N_F - 1)
        } else {
            hi = 0.0;
            lo = -0.5;
            while self.f_offset(lo) <= phi {
                lo = -1.0 + 0.5 * (1.0 + lo);
                if lo <= -1.0 + 1e-300 {
                    return Err(Error::OutOfRange { phi, phi_f });
                }
            }
        }
        // Bisection until the bracket is 1e-6 wide (relative to 1 + m), then
        // safeguarded Newton.
        let mut m = phi / (self.ti - self.u2());
        if !(m > lo && m < hi) {
            m = 0.5 * (lo + hi);
        }
        if phi.abs() > 1e-3 {
            while (hi - lo) > 1e-6 * (1.0 + 0.5 * (lo + hi)) {
                let mid = 0.5 * (lo + hi);
                if self.f_offset(mid) > phi {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            m = 0.5 * (lo + hi);
        }
        for _ in 0..100 {
            let r = self.f_offset(m) - phi;
            if r == 0.0 {
                break;
            }
            if r > 0.0 {
                lo = lo.max(m);
            } else {
                hi = hi.min(m);
            }
            let step = r / self.f_prime(1.0 + m);
            let mut next = m - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let moved = (next - m).abs();
            m = next;
            if moved <= 1e-15 * m.abs().max(1e-300) || moved == 0.0 {
                break;
            }
        }
        Ok(m)
    }

    /// `F^{-1}(Phi) in (0, N_F)`, decreasing in `Phi`.
    pub fn invert_f(&self, phi: f64) -> Result<f64> {
        Ok(1.0 + self.invert_f_offset(phi)?)
    }

    fn prefactor(&self, normalized: bool) -> f64 {
        if normalized {
            1.0
        } else {
            self.n0_trace
        }
    }

    /// Right-hand side of the layer ODE, `X(Phi) = n0 (F^{-1}(Phi) - e^{-Phi})`
    /// (without the `n0` factor when `normalized`).
    pub fn eval_x(&self, phi: f64, normalized: bool) -> Result<f64> {
        let m = self.invert_f_offset(phi)?;
        Ok(self.prefactor(normalized) * (m - (-phi).exp_m1()))
    }

    /// `dX/dPhi = n0 (1 / F'(F^{-1}(Phi)) + e^{-Phi})`.
    pub fn eval_x_prime(&self, phi: f64, normalized: bool) -> Result<f64> {
        let n = self.invert_f(phi)?;
        Ok(self.prefactor(normalized) * (1.0 / self.f_prime(n) + (-phi).exp()))
    }

    /// Potential `V(Phi) = int_0^Phi X`, by adaptive Gauss–Kronrod quadrature.
    pub fn eval_v(&self, phi: f64, normalized: bool) -> Result<f64> {
        self.invert_f_offset(phi)?;
        let integrand = |s: f64| {
            let m = self.invert_f_offset(s).unwrap_or(f64::NAN);
            m - (-s).exp_m1()
        };
        let (v, _) = quadrature::integrate(integrand, 0.0, phi, 1e-13, 1e-14);
        if !v.is_finite() {
            return Err(Error::OutOfRange { phi, phi_f: self.phi_f() });
        }
        Ok(self.prefactor(normalized) * v)
    }

    /// Decay rate of the linearised layer, `sqrt(V''(0))` of the normalised
    /// potential; the prefactored profile decays at `sqrt(n0)` times this.
    pub fn gamma(&self) -> f64 {
        decay_rate(self.ti, self.u3_trace).unwrap_or(0.0)
    }

    pub fn gamma_prefactored(&self) -> f64 {
        self.n0_trace.sqrt() * self.gamma()
    }
}

/// `gamma = sqrt((Ti + 1 - u^2) / (Ti - u^2))`.
pub fn decay_rate(ti: f64, u3_trace: f64) -> Result<f64> {
    let u2 = u3_trace * u3_trace;
    if u2 <= ti + 1.0 {
        return Err(Error::BohmViolation { u3_sq: u2, threshold: ti + 1.0 });
    }
    Ok(((ti + 1.0 - u2) / (ti - u2)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> LayerContext {
        LayerContext::new(1.0, -2.0, 1.0, 0.1).unwrap()
    }

    #[test]
    fn f_values() {
        let c = ctx();
        assert_eq!(c.eval_f(1.0).unwrap(), 0.0);
        // 2/4 + ln 2 - 2 and 2/0.25 + ln 0.5 - 2
        assert!((c.eval_f(2.0).unwrap() - (-0.806_852_819_440_054_7)).abs() < 1e-14);
        assert!((c.eval_f(0.5).unwrap() - 5.306_852_819_440_054_7).abs() < 1e-13);
        assert!(matches!(c.eval_f(0.0), Err(Error::DomainError { .. })));
        assert!(matches!(c.eval_f(-1.0), Err(Error::DomainError { .. })));
    }

    #[test]
    fn inverse_values() {
        let c = ctx();
        assert_eq!(c.invert_f(0.0).unwrap(), 1.0);
        // high-precision bisection reference
        assert!((c.invert_f(5.30685).unwrap() - 0.500_000_093_981_362_8).abs() < 1e-12);
        assert!((c.invert_f(0.1).unwrap() - 0.968_561_415_306_964_8).abs() < 1e-13);
        assert!(matches!(c.invert_f(-0.80685), Err(Error::OutOfRange { .. })));
        assert!(matches!(c.invert_f(c.phi_f()), Err(Error::OutOfRange { .. })));
        assert!(matches!(c.invert_f(c.phi_f() - 0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn x_values() {
        let c = ctx();
        assert_eq!(c.eval_x(0.0, true).unwrap(), 0.0);
        assert!((c.eval_x(0.1, true).unwrap() - 0.063_723_997_271_005_19).abs() < 1e-13);
        // X'(0) = 1/(Ti - u^2) + 1 = gamma^2
        let h = 1e-5;
        let fd = (c.eval_x(h, true).unwrap() - c.eval_x(-h, true).unwrap()) / (2.0 * h);
        assert!((fd - 2.0 / 3.0).abs() < 1e-8);
        assert!((c.eval_x_prime(0.0, true).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        let scaled = LayerContext::new(2.0, -2.0, 1.0, 0.1).unwrap();
        assert!((scaled.eval_x(0.1, false).unwrap() - 2.0 * c.eval_x(0.1, true).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn v_matches_closed_form() {
        // Substituting Phi = F(N) gives V = u^2/N + Ti N - u^2 - Ti - (1 - e^{-Phi}).
        let c = ctx();
        for (phi, reference) in [
            (0.1, 0.003_235_038_651_893_623_7),
            (0.5, 0.071_538_259_748_137_612),
            (-0.3, 0.032_629_660_971_890_335),
            (1.0, 0.245_675_443_005_097_797),
        ] {
            let v = c.eval_v(phi, true).unwrap();
            assert!((v - reference).abs() < 1e-12, "{phi}: {v}");
            let n = c.invert_f(phi).unwrap();
            let closed = 4.0 / n + n - 4.0 - 1.0 - (1.0 - (-phi).exp());
            assert!((v - closed).abs() < 1e-12);
        }
        assert_eq!(c.eval_v(0.0, true).unwrap(), 0.0);
    }

    #[test]
    fn v_second_derivative_is_gamma_squared() {
        let c = ctx();
        let d2 = |h: f64| (c.eval_v(h, true).unwrap() - 2.0 * c.eval_v(0.0, true).unwrap() + c.eval_v(-h, true).unwrap()) / (h * h);
        // Richardson extrapolation of the centred second difference
        let r = (4.0 * d2(1e-3) - d2(2e-3)) / 3.0;
        assert!((r - 2.0 / 3.0).abs() < 1e-6);
        let d1 = (c.eval_v(1e-4, true).unwrap() - c.eval_v(-1e-4, true).unwrap()) / 2e-4;
        assert!(d1.abs() < 1e-6);
    }

    #[test]
    fn v_positive_on_scan() {
        let c = ctx();
        let w = admissible_window(&c);
        for k in 1..=200 {
            let phi = k as f64 / 200.0;
            assert!(c.eval_v(phi, true).unwrap() > 0.0);
            let neg = w.lo * k as f64 / 200.0;
            assert!(c.eval_v(neg, true).unwrap() > 0.0);
        }
    }

    #[test]
    fn decay_rates() {
        assert!((decay_rate(1.0, -2.0).unwrap() - 0.816_496_580_927_726).abs() < 1e-14);
        assert!((decay_rate(1.0, -3.0).unwrap() - 0.935_414_346_693_485_3).abs() < 1e-14);
        assert!(decay_rate(1.0, -(2f64.sqrt())).unwrap_or(0.0) < 1e-7);
        assert!(matches!(decay_rate(1.0, -1.2), Err(Error::BohmViolation { .. })));
    }

    #[test]
    fn context_requires_bohm() {
        assert!(LayerContext::new(1.0, -1.2, 1.0, 0.0).is_err());
        assert!(LayerContext::new(1.0, 2.0, 1.0, 0.0).is_err());
        assert!(LayerContext::new(0.0, -2.0, 1.0, 0.0).is_err());
        assert!(ctx().n_f() > 1.0);
    }

    #[test]
    fn inverse_is_strictly_decreasing() {
        let c = ctx();
        let lo = c.phi_f() + 2.0 * PHI_F_GUARD;
        let pts: Vec<f64> = (0..100).map(|k| lo + (5.0 - lo) * k as f64 / 99.0).collect();
        let vals: Vec<f64> = pts.iter().map(|&p| c.invert_f(p).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals.iter().all(|&n| n > 0.0 && n < c.n_f()));
    }

    proptest! {
        #[test]
        fn round_trip(
            u in -4.0f64..-1.5,
            ti in 0.2f64..1.5,
            frac in 0.0f64..1.0,
        ) {
            prop_assume!(u * u > ti + 1.0 + 1e-3);
            let c = LayerContext::new(1.0, u, ti, 0.0).unwrap();
            let lo = c.phi_f() + 10.0 * PHI_F_GUARD;
            let phi = lo + (3.0 - lo) * frac;
            let n = c.invert_f(phi).unwrap();
            let back = c.eval_f(n).unwrap();
            prop_assert!((back - phi).abs() <= 1e-10 * phi.abs().max(1.0));
        }
    }
}
