use serde::Serialize;

use super::profile::SheathProfile;
use crate::error::{Error, Result};
use crate::numerics::tridiag;

/// Lower bound required of the normalised `X'(Phi0)` along a profile.
pub const ALPHA_COERCIVITY: f64 = 1e-3;

/// Wall traces of the regular expansion that feed the first layer corrector.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RegularTrace {
    /// `n1(t, 0)`
    pub n1: f64,
    /// `u1_3(t, 0)`
    pub u13: f64,
    /// `phi1(t, 0)`
    pub phi1: f64,
    /// `d3 n0(t, 0)`
    pub dn0: f64,
    /// `d3 u0_3(t, 0)`
    pub du03: f64,
    /// `d3 phi0(t, 0)`
    pub dphi0: f64,
}

/// Intermediate source terms of the first-order layer problem, on the
/// profile nodes. `f2` is the integrated mass equation, `f4` the integrated
/// momentum equation, `f5` their combination and `f6` the Poisson source.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectorSources {
    pub f2: Vec<f64>,
    pub f4: Vec<f64>,
    pub f5: Vec<f64>,
    pub f6: Vec<f64>,
}

/// Cumulative integrals `int_{z_max}^{z_k} f` on uniform nodes, fourth-order
/// accurate, plus the exponential tail `f(z_max) / gamma` beyond `z_max`.
fn integrate_from_infinity(f: &[f64], h: f64, gamma: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    out[n - 1] = -f[n - 1] / gamma;
    for k in (0..n - 1).rev() {
        let piece = if n < 4 {
            0.5 * h * (f[k] + f[k + 1])
        } else if k == 0 {
            h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0
        } else if k + 2 >= n {
            h * (9.0 * f[k + 1] + 19.0 * f[k] - 5.0 * f[k - 1] + f[k - 2]) / 24.0
        } else {
            h * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) / 24.0
        };
        out[k] = out[k + 1] - piece;
    }
    out
}

/// Sources of the first-order layer problem at time `t`.
///
/// `before` and `after` are the leading profiles at `t - dt` and `t + dt` on
/// the same nodes; they supply `d_t N0` and `d_t U03` by centred differences.
/// Pass the same profile twice for a time-frozen context.
pub fn assemble_f6(
    profile: &SheathProfile,
    before: &SheathProfile,
    after: &SheathProfile,
    dt: f64,
    trace: &RegularTrace,
) -> Result<CorrectorSources> {
    let n = profile.len();
    if before.len() != n || after.len() != n || (before.dz() - profile.dz()).abs() > 0.0 || (after.dz() - profile.dz()).abs() > 0.0 {
        return Err(Error::InvalidParameter { name: "profiles", reason: "profiles at t - dt, t, t + dt must share their nodes".into() });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: "must be > 0".into() });
    }
    let ctx = &profile.context;
    let (a, w, ti) = (ctx.n0_trace, ctx.u3_trace, ctx.ti);
    let h = profile.dz();
    let z_max = profile.z_max();
    let gamma = profile.gamma_formula;

    let dt_n: Vec<f64> = (0..n).map(|k| (after.n0[k] - before.n0[k]) / (2.0 * dt)).collect();
    let dt_u: Vec<f64> = (0..n).map(|k| (after.u03[k] - before.u03[k]) / (2.0 * dt)).collect();
    for f in [&dt_n, &dt_u] {
        let tail = f[n - 1].abs();
        if tail > 1e-8 {
            return Err(Error::QuadratureTail { value: tail, z_max });
        }
    }
    let int_n = integrate_from_infinity(&dt_n, h, gamma);
    let int_u = integrate_from_infinity(&dt_u, h, gamma);

    let mut out = CorrectorSources { f2: vec![0.0; n], f4: vec![0.0; n], f5: vec![0.0; n], f6: vec![0.0; n] };
    for k in 0..n {
        let z = profile.z_nodes[k];
        let (nn, uu) = (profile.n0[k], profile.u03[k]);
        let big_a = a + nn;
        let big_w = w + uu;
        let f2 = -z * (trace.dn0 * uu + nn * trace.du03) - int_n[k] + trace.n1 * w + a * trace.u13;
        let f4 = -z * trace.du03 * uu - ti * z * trace.dn0 * (1.0 / big_a - 1.0 / a) - int_u[k] + w * trace.u13 + ti * trace.n1 / a;
        let f5 = f4 - big_w / big_a * f2;
        let e = (-profile.phi0[k]).exp();
        let f6 = a * f5 / ctx.f_prime(big_a / a) + z * (trace.dn0 + a * e * trace.dphi0) + a * e * trace.phi1;
        out.f2[k] = f2;
        out.f4[k] = f4;
        out.f5[k] = f5;
        out.f6[k] = f6;
    }
    let tail = out.f6[n - 1].abs();
    if tail > 1e-8 {
        return Err(Error::QuadratureTail { value: tail, z_max });
    }
    Ok(out)
}

/// Solves `-Phi'' + X'(Phi0) Phi = -F6`, `Phi(0) = boundary_value`,
/// `Phi(z_max) = 0` with the three-point scheme on the profile nodes.
pub fn solve_phi1(profile: &SheathProfile, f6: &[f64], boundary_value: f64) -> Result<Vec<f64>> {
    let n = profile.len();
    if f6.len() != n {
        return Err(Error::InvalidParameter { name: "f6", reason: format!("expected {n} samples, got {}", f6.len()) });
    }
    let ctx = &profile.context;
    let h = profile.dz();
    let mut coef = Vec::with_capacity(n);
    for (k, &p) in profile.phi0.iter().enumerate() {
        let xp = ctx.eval_x_prime(p, true)?;
        if xp < ALPHA_COERCIVITY {
            return Err(Error::CoercivityLoss { value: xp, alpha: ALPHA_COERCIVITY, z: profile.z_nodes[k] });
        }
        coef.push(ctx.n0_trace * xp);
    }
    let m = n - 2;
    let h2 = h * h;
    let lower = vec![-1.0; m];
    let upper = vec![-1.0; m];
    let diag: Vec<f64> = (1..n - 1).map(|k| 2.0 + h2 * coef[k]).collect();
    let mut rhs: Vec<f64> = (1..n - 1).map(|k| -h2 * f6[k]).collect();
    rhs[0] += boundary_value;
    let inner = tridiag::solve(&lower, &diag, &upper, &rhs)?;
    let applied = tridiag::apply(&lower, &diag, &upper, &inner);
    let scale = rhs.iter().map(|v| v.abs()).fold(1e-300, f64::max).max(1.0);
    if let Some(k) = applied.iter().zip(&rhs).position(|(x, r)| (x - r).abs() > 1e-10 * scale) {
        return Err(Error::SingularSystem(k + 1));
    }
    let mut phi = Vec::with_capacity(n);
    phi.push(boundary_value);
    phi.extend(inner);
    phi.push(0.0);
    Ok(phi)
}

impl SheathProfile {
    /// Attaches the first corrector: `Phi1` from [`solve_phi1`], then
    /// `N1 + n1 = a (Phi1 + F5) / F'(N)` and `(A U1 + ...)` from the
    /// integrated mass equation.
    pub fn attach_first_order(&mut self, phi1: Vec<f64>, sources: &CorrectorSources, trace: &RegularTrace) {
        let ctx = self.context;
        let (a, w) = (ctx.n0_trace, ctx.u3_trace);
        let n = self.len();
        let mut n1 = vec![0.0; n];
        let mut u13 = vec![0.0; n];
        for k in 0..n {
            let big_a = a + self.n0[k];
            let big_w = w + self.u03[k];
            let nu = a * (phi1[k] + sources.f5[k]) / ctx.f_prime(big_a / a);
            let omega = (sources.f2[k] - nu * big_w) / big_a;
            n1[k] = nu - trace.n1;
            u13[k] = omega - trace.u13;
        }
        self.phi1 = Some(phi1);
        self.n1 = Some(n1);
        self.u13 = Some(u13);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheath::{admissible_window, solve_phi0, solve_phi0_with, LayerContext, ProfileOptions};

    fn profile(phi0: f64, dz: f64) -> SheathProfile {
        let c = LayerContext::new(1.0, -2.0, 1.0, phi0).unwrap();
        let opts = ProfileOptions { dz, ..Default::default() };
        solve_phi0_with(&c, 40.0 / c.gamma(), 1e-8, &opts).unwrap()
    }

    #[test]
    fn zero_source_gives_zero_corrector() {
        let p = profile(0.1, 0.01);
        let phi = solve_phi1(&p, &vec![0.0; p.len()], 0.0).unwrap();
        assert!(phi.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn manufactured_solution_is_second_order() {
        let err = |dz: f64| {
            let p = profile(0.1, dz);
            let c = p.context;
            let exact: Vec<f64> = p.z_nodes.iter().map(|z| (0.3 + z) * (-z).exp()).collect();
            let f6: Vec<f64> = p
                .z_nodes
                .iter()
                .zip(&p.phi0)
                .map(|(z, ph)| {
                    let d2 = (z - 2.0 + 0.3) * (-z).exp();
                    d2 - c.eval_x_prime(*ph, false).unwrap() * (0.3 + z) * (-z).exp()
                })
                .collect();
            let got = solve_phi1(&p, &f6, 0.3).unwrap();
            got.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (err(0.04), err(0.02), err(0.01));
        let r1 = (e1 / e2).log2();
        let r2 = (e2 / e3).log2();
        assert!((r1 - 2.0).abs() < 0.2 && (r2 - 2.0).abs() < 0.2, "{r1} {r2}");
    }

    #[test]
    fn coercivity_loss_above_window() {
        let c = LayerContext::new(1.0, -2.0, 1.0, 0.0).unwrap();
        let w = admissible_window(&c);
        let high = LayerContext { phi0_boundary_value: w.hi + 0.3, ..c };
        let opts = ProfileOptions { check_window: false, ..Default::default() };
        let p = solve_phi0_with(&high, 50.0, 1e-8, &opts).unwrap();
        assert!(matches!(solve_phi1(&p, &vec![0.0; p.len()], 0.0), Err(Error::CoercivityLoss { .. })));
    }

    #[test]
    fn trivial_context_has_zero_source() {
        let c = LayerContext::new(1.0, -2.0, 1.0, 0.0).unwrap();
        let p = solve_phi0(&c, 40.0, 1e-8).unwrap();
        let s = assemble_f6(&p, &p, &p, 1e-4, &RegularTrace::default()).unwrap();
        assert!(s.f6.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn source_decays_and_corrector_vanishes_at_infinity() {
        let p = profile(0.1, 0.01);
        let trace = RegularTrace { n1: 0.0, u13: 0.0, phi1: 0.0, dn0: -0.3, du03: 0.2, dphi0: 0.3 };
        let s = assemble_f6(&p, &p, &p, 1e-4, &trace).unwrap();
        assert!(s.f6.last().unwrap().abs() < 1e-8);
        assert!(s.f6.iter().fold(0.0f64, |m, v| m.max(v.abs())) > 1e-4);
        let phi1 = solve_phi1(&p, &s.f6, 0.0).unwrap();
        let mut q = p.clone();
        q.attach_first_order(phi1, &s, &trace);
        assert!(q.n1.as_ref().unwrap().last().unwrap().abs() < 1e-7);
        assert!(q.u13.as_ref().unwrap().last().unwrap().abs() < 1e-7);
    }

    #[test]
    fn tail_integral_is_fourth_order() {
        let err = |h: f64| {
            let n = (20.0 / h) as usize + 1;
            let f: Vec<f64> = (0..n).map(|k| (-(k as f64) * h).exp()).collect();
            let got = integrate_from_infinity(&f, h, 1.0);
            (0..n).map(|k| (got[k] + (-(k as f64) * h).exp()).abs()).fold(0.0, f64::max)
        };
        assert!((err(0.1) / err(0.05)).log2() > 3.7);
    }
}
