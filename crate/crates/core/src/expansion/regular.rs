use super::simple_wave::LeadingOrder;
use crate::error::{Error, Result};
use crate::model::Grid1D;

/// Regular corrector `(n^i, u^i_3, phi^i)` on the cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectorFields {
    pub n: Vec<f64>,
    pub u3: Vec<f64>,
    pub phi: Vec<f64>,
    pub time: f64,
}

/// Sources `(f_n, f_u, f_phi)` of the linearised limit system at `(t, x3)`.
pub type CorrectorSource<'a> = &'a (dyn Fn(f64, f64) -> (f64, f64, f64) + Sync);

/// Integrates the linearised limit system for a regular corrector,
///
/// ```text
/// d_t n + d_3(n0 u + n u0)               = f_n
/// d_t u + d_3(u0 u + Ti n / n0 - phi)    = f_u
/// -e^{-phi0} phi                         = n - f_phi
/// ```
///
/// from zero data up to `t_final`. All characteristics leave through the
/// wall, so the scheme upwinds from the right and the corrector vanishes at
/// the far end. Fails if the background trace stops being supersonic.
pub fn solve_regular_corrector(
    background: &dyn LeadingOrder,
    sources: CorrectorSource,
    grid: &Grid1D,
    ti: f64,
    t_final: f64,
    cfl: f64,
) -> Result<CorrectorFields> {
    let m = grid.len();
    let x = grid.centers();
    let mut n = vec![0.0; m];
    let mut u = vec![0.0; m];
    let mut t = 0.0;
    let c = (ti + 1.0).sqrt();
    let dx_min = grid.min_width();
    let phi_of = |t: f64, n: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|i| {
                let b = background.sample(t, x[i]);
                let (_, _, fp) = sources(t, x[i]);
                (fp - n[i]) / (-b.phi).exp()
            })
            .collect()
    };
    while t < t_final {
        let trace = background.sample(t, 0.0);
        if trace.u3 * trace.u3 <= ti + 1.0 || trace.u3 >= 0.0 {
            return Err(Error::SupersonicLost { t, trace_u3: trace.u3 });
        }
        let bg: Vec<_> = x.iter().map(|&xi| background.sample(t, xi)).collect();
        let vmax = bg.iter().map(|b| b.u3.abs() + c).fold(0.0, f64::max);
        let dt = (cfl * dx_min / vmax).min(t_final - t);
        let phi = phi_of(t, &n);
        let flux_n: Vec<f64> = (0..m).map(|i| bg[i].n * u[i] + n[i] * bg[i].u3).collect();
        let flux_u: Vec<f64> = (0..m).map(|i| bg[i].u3 * u[i] + ti * n[i] / bg[i].n - phi[i]).collect();
        let mut n_new = n.clone();
        let mut u_new = u.clone();
        for i in 0..m {
            let (fr_n, fr_u, xr) = if i + 1 < m { (flux_n[i + 1], flux_u[i + 1], x[i + 1]) } else { (0.0, 0.0, grid.length()) };
            let h = xr - x[i];
            let (sn, su, _) = sources(t, x[i]);
            n_new[i] = n[i] - dt * (fr_n - flux_n[i]) / h + dt * sn;
            u_new[i] = u[i] - dt * (fr_u - flux_u[i]) / h + dt * su;
        }
        n = n_new;
        u = u_new;
        t += dt;
    }
    let phi = phi_of(t, &n);
    Ok(CorrectorFields { n, u3: u, phi, time: t })
}
