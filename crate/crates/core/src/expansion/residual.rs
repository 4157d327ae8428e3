use serde::Serialize;

use super::{Expansion, LeadingOrder};
use crate::error::Result;
use crate::numerics::fd;

/// Sampling of the residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Right end of the sampled interval `[0, x_end]`.
    pub x_end: f64,
    /// Time step of the centred time differences.
    pub dt: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { x_end: 0.5, dt: 1e-4 }
    }
}

/// Residual of the approximate solution in the three equations of the full
/// system, on uniform points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub order: u32,
    pub epsilon: f64,
    pub x3: Vec<f64>,
    /// `d_t n + d_3(n u_3)`
    pub r_n: Vec<f64>,
    /// `d_t u_3 + u_3 d_3 u_3 + Ti d_3 ln n - d_3 phi`
    pub r_u: Vec<f64>,
    /// `eps^2 d_3^2 phi + e^{-phi} - n`
    pub r_phi: Vec<f64>,
    /// `L2` norms of `(r_n, r_u, r_phi)`.
    pub l2: [f64; 3],
    pub linf: [f64; 3],
    /// `L2` norms of `d_3` of each component.
    pub d3_l2: [f64; 3],
    /// `l2` divided by `eps^K`, `eps^K`, `eps^(K+1)`.
    pub scaled_l2: [f64; 3],
}

impl Residual {
    /// Euclidean combination of the three `L2` norms.
    pub fn l2_total(&self) -> f64 {
        self.l2.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn d3_l2_total(&self) -> f64 {
        self.d3_l2.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn l2(values: &[f64], h: f64) -> f64 {
    (values.iter().map(|v| v * v).sum::<f64>() * h).sqrt()
}

/// Evaluates the residual at time `t`. Points are spaced `2 dz eps` so that
/// they land on the nodes of the layer profiles. Space and time derivatives
/// are centred fourth-order differences.
pub fn residual<R: LeadingOrder>(expansion: &Expansion<R>, t: f64, opts: &ResidualOptions) -> Result<Residual> {
    let eps = expansion.epsilon();
    let ti = expansion.params().ion_temperature;
    let h = 2.0 * expansion.profile_options.dz * eps;
    let count = (opts.x_end / h).ceil() as usize + 1;
    let x: Vec<f64> = (0..count).map(|j| j as f64 * h).collect();

    let now = expansion.assemble(&x, t)?;
    let shifted = |k: f64| expansion.assemble(&x, t + k * opts.dt);
    let (m2, m1, p1, p2) = (shifted(-2.0)?, shifted(-1.0)?, shifted(1.0)?, shifted(2.0)?);
    let dt_of = |f: fn(&crate::model::PlasmaState) -> &Vec<f64>, j: usize| {
        (f(&m2)[j] - 8.0 * f(&m1)[j] + 8.0 * f(&p1)[j] - f(&p2)[j]) / (12.0 * opts.dt)
    };

    let d1 = |v: &[f64]| fd::derivative(v, h, 1, 4);
    let flux: Vec<f64> = now.n.iter().zip(&now.u3).map(|(n, u)| n * u).collect();
    let ln_n: Vec<f64> = now.n.iter().map(|n| n.ln()).collect();
    let (dflux, du, dln, dphi) = (d1(&flux), d1(&now.u3), d1(&ln_n), d1(&now.phi));
    let d2phi = fd::derivative(&now.phi, h, 2, 4);

    let mut r_n = vec![0.0; count];
    let mut r_u = vec![0.0; count];
    let mut r_phi = vec![0.0; count];
    for j in 0..count {
        let nt = dt_of(|s| &s.n, j);
        let ut = dt_of(|s| &s.u3, j);
        r_n[j] = nt + dflux[j];
        r_u[j] = ut + now.u3[j] * du[j] + ti * dln[j] - dphi[j];
        r_phi[j] = eps * eps * d2phi[j] + (-now.phi[j]).exp() - now.n[j];
    }
    let l2s = [l2(&r_n, h), l2(&r_u, h), l2(&r_phi, h)];
    let linf = [&r_n, &r_u, &r_phi].map(|r| r.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let d3 = [&r_n, &r_u, &r_phi].map(|r| l2(&d1(r), h));
    let k = expansion.order() as i32;
    let scaled = [l2s[0] / eps.powi(k), l2s[1] / eps.powi(k), l2s[2] / eps.powi(k + 1)];
    Ok(Residual { order: expansion.order(), epsilon: eps, x3: x, r_n, r_u, r_phi, l2: l2s, linf, d3_l2: d3, scaled_l2: scaled })
}
