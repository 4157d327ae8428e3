//! Finite-volume time stepping of the `eps > 0` Euler–Poisson system and of
//! its quasineutral limit on `[0, L]`.
//!
//! Conservative variables `(n, n u1, n u2, n u3)` with Rusanov fluxes, MUSCL
//! reconstruction of `(n, u)` with minmod slopes and SSP-RK2 in time. The
//! wall at `x3 = 0` is an outflow boundary handled by ghost cells; the far
//! end is fed by the reference state. For `eps > 0` the potential is
//! recomputed by [`newton_poisson`] after every stage and enters through the
//! pointwise source `n d3 phi`.

mod poisson;
mod stepper;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use poisson::{newton_poisson, PoissonBc, PoissonSolution};
pub use stepper::{ep_step, euler_limit_step, StepReport, Stepper, System};

use crate::error::{Error, Result};
use crate::model::{Grid1D, PlasmaState, DEFAULT_SONIC_MARGIN};

/// Potential imposed on the far face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FarFieldBc {
    /// `phi(L) = -ln n(L)`.
    QuasineutralDirichlet,
    /// `phi(L) = -ln n_ref`.
    ReferenceState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reconstruction {
    FirstOrder,
    MusclMinmod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub cfl: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub far_field_bc: FarFieldBc,
    pub reconstruction: Reconstruction,
    /// Distance to a sonic threshold below which the wall trace counts as
    /// having left its regime.
    pub sonic_margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            newton_tol: 1e-11,
            newton_max_iter: 50,
            far_field_bc: FarFieldBc::QuasineutralDirichlet,
            reconstruction: Reconstruction::MusclMinmod,
            sonic_margin: DEFAULT_SONIC_MARGIN,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(Error::InvalidParameter { name, reason: reason.into() });
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return bad("cfl", "must lie in (0, 0.5]");
        }
        if !(self.newton_tol > 0.0 && self.newton_tol <= 1e-10) {
            return bad("newton_tol", "must lie in (0, 1e-10]");
        }
        if self.newton_max_iter == 0 {
            return bad("newton_max_iter", "must be positive");
        }
        if !(self.sonic_margin > 0.0) {
            return bad("sonic_margin", "must be positive");
        }
        Ok(())
    }
}

/// Callback invoked by [`run`] on the initial state, at every observation
/// time and on the final state.
pub trait Observer {
    fn observe(&mut self, state: &PlasmaState) -> Result<()>;
}

impl<F: FnMut(&PlasmaState) -> Result<()>> Observer for F {
    fn observe(&mut self, state: &PlasmaState) -> Result<()> {
        self(state)
    }
}

/// Observer writing snapshot rows `t, x3, n, u1, u2, u3, phi`.
pub struct SnapshotWriter<W: Write> {
    out: W,
    x3: Vec<f64>,
}

impl<W: Write> SnapshotWriter<W> {
    pub fn new(mut out: W, grid: &Grid1D) -> Result<Self> {
        writeln!(out, "t,x3,n,u1,u2,u3,phi")?;
        Ok(Self { out, x3: grid.centers().to_vec() })
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Observer for SnapshotWriter<W> {
    fn observe(&mut self, s: &PlasmaState) -> Result<()> {
        for i in 0..s.len() {
            writeln!(
                self.out,
                "{:.12e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.time, self.x3[i], s.n[i], s.u1[i], s.u2[i], s.u3[i], s.phi[i]
            )?;
        }
        Ok(())
    }
}

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub state: PlasmaState,
    pub steps: usize,
    /// Newton iterations of the initial, cold-started Poisson solve.
    pub initial_newton_iterations: usize,
    /// Largest Newton count of any warm-started solve.
    pub max_newton_iterations: usize,
    pub max_poisson_residual: f64,
    /// Largest `|mass change - dt * boundary flux| / mass` of a step.
    pub max_mass_defect: f64,
}

/// Advances `initial` to `t_final`, calling the observers at `t = 0`, every
/// `observe_every` and at `t_final`. Steps are shortened to land on those
/// times. The initial potential is recomputed from the initial density.
pub fn run(
    stepper: &Stepper,
    initial: PlasmaState,
    t_final: f64,
    observe_every: Option<f64>,
    observers: &mut [&mut dyn Observer],
) -> Result<RunSummary> {
    if !(t_final >= 0.0 && t_final <= stepper.params().final_time * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("must lie in [0, final_time = {}]", stepper.params().final_time),
        });
    }
    let (mut state, initial_newton_iterations) = stepper.prepare(initial)?;
    let t0 = state.time;
    for o in observers.iter_mut() {
        o.observe(&state)?;
    }
    let mut summary = RunSummary {
        state: state.clone(),
        steps: 0,
        initial_newton_iterations,
        max_newton_iterations: 0,
        max_poisson_residual: 0.0,
        max_mass_defect: 0.0,
    };
    let end = t0 + t_final;
    let mut next_obs = observe_every.map(|h| t0 + h);
    while state.time < end - 1e-14 * end.abs().max(1.0) {
        let target = next_obs.map_or(end, |t| t.min(end));
        let dt = stepper.cfl_dt(&state).min(target - state.time);
        let (next, report) = stepper.step_dt(&state, dt)?;
        state = next;
        if (target - state.time).abs() <= 1e-14 * target.abs().max(1.0) {
            state.time = target;
        }
        summary.steps += 1;
        summary.max_newton_iterations = summary.max_newton_iterations.max(report.newton_iterations);
        summary.max_poisson_residual = summary.max_poisson_residual.max(report.poisson_residual);
        summary.max_mass_defect = summary.max_mass_defect.max(report.mass_defect);
        if let (Some(t), Some(h)) = (next_obs, observe_every) {
            if state.time >= t && state.time < end {
                for o in observers.iter_mut() {
                    o.observe(&state)?;
                }
                next_obs = Some(t + h);
            }
        }
    }
    if summary.steps > 0 {
        for o in observers.iter_mut() {
            o.observe(&state)?;
        }
    }
    summary.state = state;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{Bump, LeadingOrder, SimpleWave};
    use crate::model::{build_grid, Parameters, Regime};

    fn setup(g: &Grid1D) -> (Parameters, PlasmaState) {
        let p = Parameters { epsilon: 0.02, ..Parameters::default() };
        let w = SimpleWave::new(1.0, 1.0, -2.0, Bump { center: 0.25, width: 0.2, amplitude: 0.1 }).unwrap();
        let mut s = PlasmaState::zeros(g.len());
        for (i, &x) in g.centers().iter().enumerate() {
            let r = w.sample(0.0, x);
            s.n[i] = r.n;
            s.u3[i] = r.u3;
            s.phi[i] = r.phi;
        }
        (p, s)
    }

    #[test]
    fn zero_time_returns_the_initial_state() {
        let g = Grid1D::uniform(1.0, 100).unwrap();
        let (p, s) = setup(&g);
        let st = Stepper::new(&g, &p, &SolverConfig::default(), Regime::Supersonic, System::QuasineutralLimit).unwrap();
        let out = run(&st, s.clone(), 0.0, None, &mut []).unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(out.state.n, s.n);
    }

    fn csv(g: &Grid1D, cfl: f64) -> (Vec<u8>, RunSummary) {
        let (p, s) = setup(g);
        let cfg = SolverConfig { cfl, ..SolverConfig::default() };
        let st = Stepper::new(g, &p, &cfg, Regime::Supersonic, System::EulerPoisson).unwrap();
        let mut w = SnapshotWriter::new(Vec::new(), g).unwrap();
        let out = run(&st, s, 0.02, Some(0.01), &mut [&mut w]).unwrap();
        (w.into_inner(), out)
    }

    #[test]
    fn runs_are_bit_identical() {
        let g = build_grid(1.0, 0.02, 0.8, 0.01).unwrap();
        let (a, sa) = csv(&g, 0.4);
        let (b, _) = csv(&g, 0.4);
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("t,x3,n,u1,u2,u3,phi\n"));
        // t = 0, 0.01 and 0.02
        assert_eq!(text.lines().count(), 1 + 3 * g.len());
        assert!(sa.max_newton_iterations <= 6);
        assert!((sa.state.time - 0.02).abs() < 1e-15);
    }

    #[test]
    fn time_error_is_second_order() {
        let g = build_grid(1.0, 0.02, 0.8, 0.01).unwrap();
        let finals: Vec<PlasmaState> = [0.4, 0.2, 0.1].iter().map(|&c| csv(&g, c).1.state).collect();
        let d = |a: &PlasmaState, b: &PlasmaState| g.l2_norm(&a.difference(b).n);
        let ratio = d(&finals[0], &finals[1]) / d(&finals[1], &finals[2]);
        assert!(ratio > 3.0 && ratio < 5.0, "{ratio}");
    }

    #[test]
    fn config_bounds() {
        assert!(SolverConfig { cfl: 0.6, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { newton_tol: 1e-8, ..Default::default() }.validate().is_err());
        SolverConfig::default().validate().unwrap();
        let text = toml::to_string(&SolverConfig::default()).unwrap();
        assert!(text.contains("far_field_bc = \"quasineutral_dirichlet\""));
        assert!(text.contains("reconstruction = \"muscl_minmod\""));
    }
}
