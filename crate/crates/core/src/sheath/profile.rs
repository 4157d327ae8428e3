use std::io::Write;

use serde::Serialize;

use super::corrector::ALPHA_COERCIVITY;
use super::{LayerContext, PHI_F_GUARD};
use crate::error::{Error, Result};
use crate::numerics::{fd, fit, interp::MonotoneCubic};

/// Range of wall values `Phi0(0)` for which the connecting orbit exists and
/// the linearised operator stays coercive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleWindow {
    pub lo: f64,
    pub hi: f64,
}

impl AdmissibleWindow {
    /// Empty when `X'(0) = gamma^2` is already below the coercivity bound.
    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn contains(&self, phi: f64) -> bool {
        !self.is_empty() && phi >= self.lo && phi <= self.hi
    }
}

/// Scans the normalised `X'` with step `1e-2`, then refines each end by
/// bisection.
pub fn admissible_window(ctx: &LayerContext) -> AdmissibleWindow {
    let alpha = ALPHA_COERCIVITY;
    let xp = |phi: f64| ctx.eval_x_prime(phi, true).unwrap_or(f64::NEG_INFINITY);
    if xp(0.0) < alpha {
        return AdmissibleWindow { lo: 0.0, hi: 0.0 };
    }
    let bisect = |mut good: f64, mut bad: f64, ok: &dyn Fn(f64) -> bool| {
        while (good - bad).abs() > 1e-12 * (1.0 + good.abs()) {
            let mid = 0.5 * (good + bad);
            if ok(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };

    let step = 1e-2;
    let up_ok = |p: f64| xp(p) >= alpha;
    let mut p = 0.0;
    let hi = loop {
        let next = p + step;
        if !up_ok(next) {
            break bisect(p, next, &up_ok);
        }
        p = next;
        if p > 500.0 {
            break p;
        }
    };

    let floor = ctx.phi_f() + 2.0 * PHI_F_GUARD;
    let down_ok = |p: f64| p >= floor && xp(p) > alpha && ctx.eval_v(p, true).map(|v| v > 0.0).unwrap_or(false);
    let mut p = 0.0;
    let lo = loop {
        let next = (p - step).max(floor);
        if !down_ok(next) {
            break bisect(p, next, &down_ok);
        }
        if next == floor {
            break floor;
        }
        p = next;
    };
    AdmissibleWindow { lo, hi }
}

/// Discretisation of the leading-order profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    /// Node spacing in `z`.
    pub dz: f64,
    /// RK4 substeps per node interval.
    pub substeps: usize,
    /// Reject `Phi0(0)` outside [`admissible_window`]. When off, only the
    /// existence of the orbit is required (`V > 0` between `Phi0(0)` and 0).
    pub check_window: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { dz: 0.01, substeps: 2, check_window: true }
    }
}

/// Tabulated layer profiles on uniform nodes `z_k = k dz`.
#[derive(Debug, Clone, PartialEq)]
pub struct SheathProfile {
    pub context: LayerContext,
    pub z_nodes: Vec<f64>,
    pub phi0: Vec<f64>,
    /// `dPhi0/dz = -sign(Phi0) sqrt(2 V(Phi0))`.
    pub dphi0: Vec<f64>,
    pub n0: Vec<f64>,
    pub u03: Vec<f64>,
    pub phi1: Option<Vec<f64>>,
    pub n1: Option<Vec<f64>>,
    pub u13: Option<Vec<f64>>,
    pub measured_decay_rate: f64,
    /// `sqrt(n0_trace) * gamma`, the decay rate of the prefactored ODE.
    pub gamma_formula: f64,
    /// First node of the analytic exponential tail.
    pub tail_start: usize,
}

/// Leading-order profile with the default discretisation; `tol` is the
/// magnitude at which the exponential tail takes over.
pub fn solve_phi0(ctx: &LayerContext, z_max: f64, tol: f64) -> Result<SheathProfile> {
    solve_phi0_with(ctx, z_max, tol, &ProfileOptions::default())
}

pub fn solve_phi0_with(ctx: &LayerContext, z_max: f64, tol: f64, opts: &ProfileOptions) -> Result<SheathProfile> {
    let phi_start = ctx.phi0_boundary_value;
    let gamma = ctx.gamma_prefactored();
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", reason: "must be > 0".into() });
    }
    if !(z_max >= 30.0 / gamma) {
        return Err(Error::InvalidParameter { name: "z_max", reason: format!("{z_max} is shorter than 30 / gamma = {}", 30.0 / gamma) });
    }
    if !(opts.dz > 0.0) || opts.substeps == 0 {
        return Err(Error::InvalidParameter { name: "dz", reason: "need dz > 0 and substeps >= 1".into() });
    }
    let window = admissible_window(ctx);
    let floor = ctx.phi_f() + 2.0 * PHI_F_GUARD;
    let outside = if opts.check_window { !window.contains(phi_start) && phi_start != 0.0 } else { phi_start < floor };
    if outside {
        return Err(Error::InadmissibleBoundaryValue { value: phi_start, lo: window.lo, hi: window.hi });
    }

    let m = (z_max / opts.dz).ceil() as usize;
    let z_nodes: Vec<f64> = (0..=m).map(|k| k as f64 * opts.dz).collect();
    let mut phi0 = vec![0.0; m + 1];
    let mut dphi0 = vec![0.0; m + 1];
    let mut tail_start = 0;

    if phi_start != 0.0 {
        let slope = |phi: f64| -> Result<f64> {
            if phi == 0.0 {
                return Ok(0.0);
            }
            let v = ctx.eval_v(phi, false)?;
            if !(v > 0.0) {
                return Err(Error::NonPositiveV { phi, v });
            }
            Ok(-phi.signum() * (2.0 * v).sqrt())
        };
        let h = opts.dz / opts.substeps as f64;
        let mut phi = phi_start;
        phi0[0] = phi;
        dphi0[0] = slope(phi)?;
        let mut k = 0;
        while k < m && phi.abs() >= tol {
            for _ in 0..opts.substeps {
                let k1 = slope(phi)?;
                let k2 = slope(phi + 0.5 * h * k1)?;
                let k3 = slope(phi + 0.5 * h * k2)?;
                let k4 = slope(phi + h * k3)?;
                phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            k += 1;
            phi0[k] = phi;
            dphi0[k] = slope(phi)?;
        }
        tail_start = k;
        for j in k + 1..=m {
            phi0[j] = phi * (-gamma * (z_nodes[j] - z_nodes[k])).exp();
            dphi0[j] = -gamma * phi0[j];
        }
        if phi0.windows(2).any(|w| (w[1] - w[0]) * phi_start > 0.0) {
            return Err(Error::NonPositiveV { phi: phi_start, v: f64::NAN });
        }
    }

    let measured_decay_rate =
        if phi_start == 0.0 { gamma } else { fit_log_slope(&z_nodes, &phi0, 5.0 / gamma, 15.0 / gamma).unwrap_or(f64::NAN) };
    let mut profile = SheathProfile {
        context: *ctx,
        z_nodes,
        phi0,
        dphi0,
        n0: Vec::new(),
        u03: Vec::new(),
        phi1: None,
        n1: None,
        u13: None,
        measured_decay_rate,
        gamma_formula: gamma,
        tail_start,
    };
    build_layer_fields(&mut profile)?;
    Ok(profile)
}

fn fit_log_slope(z: &[f64], phi: &[f64], z0: f64, z1: f64) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        z.iter().zip(phi).filter(|(&zz, &p)| zz >= z0 && zz <= z1 && p != 0.0).map(|(&zz, &p)| (zz, p.abs().ln())).unzip();
    Ok(-fit::linear_fit(&xs, &ys)?.slope)
}

/// Fills `N0 = n0 (F^{-1}(Phi0) - 1)` and `U03 = n0 w / (n0 + N0) - w` from
/// the tabulated `Phi0`.
pub fn build_layer_fields(profile: &mut SheathProfile) -> Result<()> {
    let ctx = profile.context;
    let mut n0 = Vec::with_capacity(profile.phi0.len());
    let mut u03 = Vec::with_capacity(profile.phi0.len());
    for &p in &profile.phi0 {
        let (nn, uu) = layer_density_velocity(&ctx, p)?;
        n0.push(nn);
        u03.push(uu);
    }
    profile.n0 = n0;
    profile.u03 = u03;
    Ok(())
}

/// `(N0, U03)` for a single value of `Phi0`.
pub(crate) fn layer_density_velocity(ctx: &LayerContext, phi0: f64) -> Result<(f64, f64)> {
    let m = ctx.invert_f_offset(phi0)?;
    Ok((ctx.n0_trace * m, -ctx.u3_trace * m / (1.0 + m)))
}

/// Layer fields at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LayerSample {
    pub phi0: f64,
    pub n0: f64,
    pub u03: f64,
    pub phi1: f64,
    pub n1: f64,
    pub u13: f64,
}

/// Interpolants over a [`SheathProfile`], beyond `z_max` the fields vanish.
#[derive(Debug, Clone)]
pub struct ProfileSampler {
    context: LayerContext,
    z_max: f64,
    phi0: MonotoneCubic,
    first: Option<[MonotoneCubic; 3]>,
}

impl ProfileSampler {
    pub fn sample(&self, z: f64) -> LayerSample {
        if z > self.z_max || z < 0.0 {
            return LayerSample::default();
        }
        let phi0 = self.phi0.eval(z);
        let (n0, u03) = layer_density_velocity(&self.context, phi0).unwrap_or((0.0, 0.0));
        let mut s = LayerSample { phi0, n0, u03, ..Default::default() };
        if let Some([p, n, u]) = &self.first {
            s.phi1 = p.eval(z);
            s.n1 = n.eval(z);
            s.u13 = u.eval(z);
        }
        s
    }
}

impl SheathProfile {
    pub fn z_max(&self) -> f64 {
        *self.z_nodes.last().unwrap()
    }

    pub fn dz(&self) -> f64 {
        self.z_nodes[1] - self.z_nodes[0]
    }

    pub fn len(&self) -> usize {
        self.z_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_nodes.is_empty()
    }

    pub fn has_first_order(&self) -> bool {
        self.phi1.is_some()
    }

    /// Largest relative defect of `(n0 + N0)(w + U03) = n0 w` over the nodes.
    pub fn flux_defect(&self) -> f64 {
        let a = self.context.n0_trace;
        let w = self.context.u3_trace;
        self.n0.iter().zip(&self.u03).map(|(nn, uu)| ((a + nn) * (w + uu) - a * w).abs() / (a * w).abs()).fold(0.0, f64::max)
    }

    /// Largest relative defect of `(Phi0')^2 = 2 V(Phi0)` over the nodes.
    pub fn hamiltonian_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (&p, &d) in self.phi0.iter().zip(&self.dphi0) {
            if p == 0.0 {
                continue;
            }
            let v2 = 2.0 * self.context.eval_v(p, false)?;
            worst = worst.max((d * d - v2).abs() / v2);
        }
        Ok(worst)
    }

    pub fn sampler(&self) -> ProfileSampler {
        let phi0 = MonotoneCubic::with_slopes(self.z_nodes.clone(), self.phi0.clone(), self.dphi0.clone());
        let first = match (&self.phi1, &self.n1, &self.u13) {
            (Some(p), Some(n), Some(u)) => {
                let h = self.dz();
                let interp = |y: &Vec<f64>| MonotoneCubic::hermite(self.z_nodes.clone(), y.clone(), fd::derivative(y, h, 1, 4));
                Some([interp(p), interp(n), interp(u)])
            }
            _ => None,
        };
        ProfileSampler { context: self.context, z_max: self.z_max(), phi0, first }
    }

    /// CSV with columns `z, Phi0, N0, U03, Phi1` (`Phi1 = 0` when the first
    /// corrector was not computed).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "z,Phi0,N0,U03,Phi1")?;
        for k in 0..self.len() {
            let p1 = self.phi1.as_ref().map_or(0.0, |v| v[k]);
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", self.z_nodes[k], self.phi0[k], self.n0[k], self.u03[k], p1)?;
        }
        Ok(())
    }
}
