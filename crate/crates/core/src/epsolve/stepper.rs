use super::poisson::{newton_poisson, PoissonBc};
use super::{Reconstruction, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{classify_regime, Grid1D, Parameters, PlasmaState, Regime};

/// Which system a [`Stepper`] advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    /// `eps > 0`: pressure `Ti n`, source `n d3 phi`, Poisson for `phi`.
    EulerPoisson,
    /// `eps = 0`: pressure `(Ti + 1) n`, `phi = -ln n`.
    QuasineutralLimit,
}

/// Diagnostics of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    /// Mass flux `n u3` through the wall face, averaged over the stages.
    pub wall_mass_flux: f64,
    pub far_mass_flux: f64,
    /// Largest Newton count of the stage solves (0 for the limit system).
    pub newton_iterations: usize,
    pub poisson_residual: f64,
    /// `|mass change - dt (wall flux - far flux)| / mass`.
    pub mass_defect: f64,
}

type Cons = [f64; 4];

/// One system on one grid, with its parameters and configuration.
#[derive(Debug, Clone)]
pub struct Stepper<'g> {
    grid: &'g Grid1D,
    params: Parameters,
    cfg: SolverConfig,
    regime: Regime,
    system: System,
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

impl<'g> Stepper<'g> {
    /// `regime` is the declared regime of the wall trace; it must be
    /// supersonic or intermediate.
    pub fn new(grid: &'g Grid1D, params: &Parameters, cfg: &SolverConfig, regime: Regime, system: System) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        if regime == Regime::SubsonicOrCharacteristic {
            return Err(Error::InvalidParameter { name: "regime", reason: "only supersonic and intermediate outflow".into() });
        }
        Ok(Self { grid, params: *params, cfg: *cfg, regime, system })
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn grid(&self) -> &Grid1D {
        self.grid
    }

    pub fn system(&self) -> System {
        self.system
    }

    fn pressure(&self) -> f64 {
        match self.system {
            System::EulerPoisson => self.params.ion_temperature,
            System::QuasineutralLimit => self.params.ion_temperature + 1.0,
        }
    }

    /// `cfl * min dx / (max |u3| + sqrt(Ti + 1))`.
    pub fn cfl_dt(&self, s: &PlasmaState) -> f64 {
        let c = (self.params.ion_temperature + 1.0).sqrt();
        let vmax = s.u3.iter().fold(0.0f64, |a, u| a.max(u.abs())) + c;
        self.cfg.cfl * self.grid.min_width() / vmax
    }

    fn poisson_bc(&self) -> PoissonBc {
        PoissonBc::from_params(&self.params)
    }

    /// Checks the wall trace against the declared regime.
    pub fn check_trace(&self, s: &PlasmaState) -> Result<()> {
        let u = s.u3[0];
        let found = classify_regime(u, self.params.ion_temperature, self.cfg.sonic_margin).ok();
        if found == Some(self.regime) {
            return Ok(());
        }
        Err(match self.system {
            System::EulerPoisson => Error::BohmLost { t: s.time, trace_u3: u },
            System::QuasineutralLimit => Error::RegimeMismatch { t: s.time, trace_u3: u, expected: self.regime.name() },
        })
    }

    /// Validates the initial state and computes its potential: one Poisson
    /// solve (warm-started from the given `phi`) or `-ln n`. Returns the
    /// Newton count.
    pub fn prepare(&self, mut s: PlasmaState) -> Result<(PlasmaState, usize)> {
        s.validate(self.grid)?;
        self.check_trace(&s)?;
        match self.system {
            System::EulerPoisson => {
                let guess = s.phi.iter().all(|p| p.is_finite()).then_some(s.phi.as_slice());
                let sol = newton_poisson(&s.n, self.grid, self.params.epsilon, &self.poisson_bc(), &self.cfg, guess)?;
                s.phi = sol.phi;
                Ok((s, sol.iterations))
            }
            System::QuasineutralLimit => {
                s.phi = s.n.iter().map(|n| -n.ln()).collect();
                Ok((s, 0))
            }
        }
    }

    /// Left and right ghost states `(n, u1, u2, u3)`.
    fn ghosts(&self, s: &PlasmaState) -> ([f64; 4], [f64; 4]) {
        let inner = [s.n[0], s.u1[0], s.u2[0], s.u3[0]];
        let left = match (self.system, self.regime) {
            (System::QuasineutralLimit, Regime::Intermediate) => {
                // density pinned, outgoing invariant u3 - c ln n carried out
                let c = self.pressure().sqrt();
                let n_wall = (-self.params.phi_b()).exp();
                let u3 = inner[3] - c * inner[0].ln() + c * n_wall.ln();
                [n_wall, inner[1], inner[2], u3]
            }
            _ => inner,
        };
        let right = [self.params.n_ref, 0.0, 0.0, self.params.w_ref];
        (left, right)
    }

    fn flux(&self, q: &[f64; 4]) -> Cons {
        let [n, u1, u2, u3] = *q;
        let m = n * u3;
        [m, m * u1, m * u2, m * u3 + self.pressure() * n]
    }

    fn rusanov(&self, l: &[f64; 4], r: &[f64; 4]) -> Cons {
        let c = self.pressure().sqrt();
        let a = (l[3].abs() + c).max(r[3].abs() + c);
        let (fl, fr) = (self.flux(l), self.flux(r));
        let (ul, ur) = (cons(l), cons(r));
        std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * a * (ur[k] - ul[k]))
    }

    /// Semi-discrete right-hand side and the wall/far face fluxes.
    fn rhs(&self, s: &PlasmaState, phi_far: f64) -> (Vec<Cons>, Cons, Cons) {
        let m = self.grid.len();
        let x = self.grid.centers();
        let w = self.grid.widths();
        let len = self.grid.length();
        let q: Vec<[f64; 4]> = (0..m).map(|i| [s.n[i], s.u1[i], s.u2[i], s.u3[i]]).collect();
        let (gl, gr) = self.ghosts(s);
        let slopes: Vec<[f64; 4]> = match self.cfg.reconstruction {
            Reconstruction::FirstOrder => vec![[0.0; 4]; m],
            Reconstruction::MusclMinmod => (0..m)
                .map(|i| {
                    let (ql, xl) = if i == 0 { (gl, -x[0]) } else { (q[i - 1], x[i - 1]) };
                    let (qr, xr) = if i + 1 == m { (gr, 2.0 * len - x[i]) } else { (q[i + 1], x[i + 1]) };
                    std::array::from_fn(|k| minmod((q[i][k] - ql[k]) / (x[i] - xl), (qr[k] - q[i][k]) / (xr - x[i])))
                })
                .collect(),
        };
        let face = |i: usize, side: f64| -> [f64; 4] { std::array::from_fn(|k| q[i][k] + side * 0.5 * w[i] * slopes[i][k]) };
        let fluxes: Vec<Cons> = (0..=m)
            .map(|j| {
                let l = if j == 0 { gl } else { face(j - 1, 1.0) };
                let r = if j == m { gr } else { face(j, -1.0) };
                self.rusanov(&l, &r)
            })
            .collect();
        let mut out: Vec<Cons> = (0..m).map(|i| std::array::from_fn(|k| -(fluxes[i + 1][k] - fluxes[i][k]) / w[i])).collect();
        if self.system == System::EulerPoisson {
            let phi_b = self.params.phi_b();
            for i in 0..m {
                let (pl, xl) = if i == 0 { (phi_b, 0.0) } else { (s.phi[i - 1], x[i - 1]) };
                let (pr, xr) = if i + 1 == m { (phi_far, len) } else { (s.phi[i + 1], x[i + 1]) };
                let (a, b) = (x[i] - xl, xr - x[i]);
                let dphi = (-b / (a * (a + b))) * pl + (b - a) / (a * b) * s.phi[i] + a / (b * (a + b)) * pr;
                out[i][3] += s.n[i] * dphi;
            }
        }
        (out, fluxes[0], fluxes[m])
    }

    /// Applies `base + dt * rhs` (optionally averaged with `avg`) and
    /// returns the new primitive state with its potential.
    fn stage(
        &self,
        s: &PlasmaState,
        dt: f64,
        phi_far: f64,
        avg: Option<&PlasmaState>,
    ) -> Result<(PlasmaState, Cons, Cons, usize, f64, f64)> {
        let (r, fw, ff) = self.rhs(s, phi_far);
        let m = s.len();
        let mut next = s.clone();
        for i in 0..m {
            let mut u: Cons = std::array::from_fn(|k| cons(&[s.n[i], s.u1[i], s.u2[i], s.u3[i]])[k] + dt * r[i][k]);
            if let Some(a) = avg {
                let u0 = cons(&[a.n[i], a.u1[i], a.u2[i], a.u3[i]]);
                u = std::array::from_fn(|k| 0.5 * (u0[k] + u[k]));
            }
            if !(u[0] > 0.0) {
                return Err(Error::NegativeDensity { cell: i, value: u[0] });
            }
            next.n[i] = u[0];
            next.u1[i] = u[1] / u[0];
            next.u2[i] = u[2] / u[0];
            next.u3[i] = u[3] / u[0];
        }
        let (iters, res, far) = match self.system {
            System::EulerPoisson => {
                let sol = newton_poisson(&next.n, self.grid, self.params.epsilon, &self.poisson_bc(), &self.cfg, Some(&s.phi))?;
                next.phi = sol.phi;
                (sol.iterations, sol.residual, sol.phi_far)
            }
            System::QuasineutralLimit => {
                next.phi = next.n.iter().map(|n| -n.ln()).collect();
                (0, 0.0, 0.0)
            }
        };
        Ok((next, fw, ff, iters, res, far))
    }

    fn far_potential(&self, s: &PlasmaState) -> f64 {
        match self.cfg.far_field_bc {
            super::FarFieldBc::QuasineutralDirichlet => -s.n[s.len() - 1].ln(),
            super::FarFieldBc::ReferenceState => self.params.phi_ref(),
        }
    }

    /// One SSP-RK2 step with the CFL time step.
    pub fn step(&self, s: &PlasmaState) -> Result<(PlasmaState, StepReport)> {
        self.step_dt(s, self.cfl_dt(s))
    }

    /// One SSP-RK2 step of length `dt` (used to run several systems in
    /// lockstep).
    pub fn step_dt(&self, s: &PlasmaState, dt: f64) -> Result<(PlasmaState, StepReport)> {
        self.check_trace(s)?;
        let mass0 = s.total_mass(self.grid);
        let (s1, fw1, ff1, it1, _, far1) = self.stage(s, dt, self.far_potential(s), None)?;
        let (mut s2, fw2, ff2, it2, res2, _) = self.stage(&s1, dt, far1, Some(s))?;
        s2.time = s.time + dt;
        let wall = 0.5 * (fw1[0] + fw2[0]);
        let far = 0.5 * (ff1[0] + ff2[0]);
        let mass1 = s2.total_mass(self.grid);
        let mass_defect = ((mass1 - mass0) - dt * (wall - far)).abs() / mass0;
        let report = StepReport {
            dt,
            wall_mass_flux: wall,
            far_mass_flux: far,
            newton_iterations: it1.max(it2),
            poisson_residual: res2,
            mass_defect,
        };
        Ok((s2, report))
    }
}

fn cons(q: &[f64; 4]) -> Cons {
    let [n, u1, u2, u3] = *q;
    [n, n * u1, n * u2, n * u3]
}

/// One CFL step of the `eps > 0` system.
pub fn ep_step(
    s: &PlasmaState,
    grid: &Grid1D,
    params: &Parameters,
    regime: Regime,
    cfg: &SolverConfig,
) -> Result<(PlasmaState, StepReport)> {
    Stepper::new(grid, params, cfg, regime, System::EulerPoisson)?.step(s)
}

/// One CFL step of the quasineutral limit system in the given regime.
pub fn euler_limit_step(
    s: &PlasmaState,
    grid: &Grid1D,
    params: &Parameters,
    regime: Regime,
    cfg: &SolverConfig,
) -> Result<(PlasmaState, StepReport)> {
    Stepper::new(grid, params, cfg, regime, System::QuasineutralLimit)?.step(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{Bump, LeadingOrder, SimpleWave};
    use crate::model::build_grid;

    fn params(phi_c: f64, w_ref: f64) -> Parameters {
        Parameters { phi_c, w_ref, epsilon: 0.02, final_time: 1.0, ..Parameters::default() }
    }

    #[test]
    fn uniform_state_is_a_fixed_point() {
        let g = build_grid(1.0, 0.02, 0.8, 0.01).unwrap();
        let p = params(0.0, -2.0);
        let cfg = SolverConfig::default();
        for system in [System::EulerPoisson, System::QuasineutralLimit] {
            let st = Stepper::new(&g, &p, &cfg, Regime::Supersonic, system).unwrap();
            let (s0, _) = st.prepare(PlasmaState::uniform(g.len(), 1.0, -2.0, 0.0)).unwrap();
            let (s1, r) = st.step(&s0).unwrap();
            for (a, b) in s1.n.iter().zip(&s0.n).chain(s1.u3.iter().zip(&s0.u3)).chain(s1.phi.iter().zip(&s0.phi)) {
                assert!((a - b).abs() < 1e-14);
            }
            assert!(r.newton_iterations == 0);
        }
    }

    #[test]
    fn mass_changes_by_the_boundary_fluxes() {
        let g = build_grid(1.5, 0.02, 0.8, 0.005).unwrap();
        let p = params(0.05, -2.0);
        let w = SimpleWave::new(1.0, 1.0, -2.0, Bump { center: 0.25, width: 0.2, amplitude: 0.1 }).unwrap();
        let mut s = PlasmaState::zeros(g.len());
        for (i, &x) in g.centers().iter().enumerate() {
            let r = w.sample(0.0, x);
            s.n[i] = r.n;
            s.u3[i] = r.u3;
            s.phi[i] = r.phi;
        }
        let st = Stepper::new(&g, &p, &SolverConfig::default(), Regime::Supersonic, System::EulerPoisson).unwrap();
        let (mut s, _) = st.prepare(s).unwrap();
        for _ in 0..20 {
            let (next, r) = st.step(&s).unwrap();
            assert!(r.mass_defect < 1e-10, "{}", r.mass_defect);
            assert!(r.wall_mass_flux < 0.0);
            assert!(r.poisson_residual < 1e-11 && r.newton_iterations <= 6);
            s = next;
        }
    }

    #[test]
    fn intermediate_wall_density_relaxes_to_the_boundary_value() {
        let g = Grid1D::uniform(1.0, 400).unwrap();
        let p = params(0.02, -1.25);
        let cfg = SolverConfig::default();
        let st = Stepper::new(&g, &p, &cfg, Regime::Intermediate, System::QuasineutralLimit).unwrap();
        let (mut s, _) = st.prepare(PlasmaState::uniform(g.len(), 1.0, -1.25, 0.0)).unwrap();
        while s.time < 0.5 {
            s = st.step(&s).unwrap().0;
        }
        let c = 2f64.sqrt();
        let n_wall = (-0.02f64).exp();
        let u_wall = -1.25 + c * n_wall.ln();
        for i in 0..5 {
            assert!((s.n[i] - n_wall).abs() < 2.5e-3 * 0.02, "{} {}", s.n[i], n_wall);
            assert!((s.u3[i] - u_wall).abs() < 2.5e-3 * 0.02 * c * 2.0);
        }
    }

    fn advect(cells: usize) -> f64 {
        let g = Grid1D::uniform(1.5, cells).unwrap();
        let p = Parameters { phi_c: 0.0, final_time: 0.1, ..Parameters::default() };
        let w = SimpleWave::new(1.0, 1.0, -2.0, Bump { center: 0.8, width: 0.3, amplitude: 0.1 }).unwrap();
        let mut s = PlasmaState::zeros(cells);
        for (i, &x) in g.centers().iter().enumerate() {
            let r = w.sample(0.0, x);
            s.n[i] = r.n;
            s.u3[i] = r.u3;
        }
        let st = Stepper::new(&g, &p, &SolverConfig::default(), Regime::Supersonic, System::QuasineutralLimit).unwrap();
        let mut s = st.prepare(s).unwrap().0;
        let t_end = 0.1;
        while s.time < t_end - 1e-14 {
            let dt = st.cfl_dt(&s).min(t_end - s.time);
            s = st.step_dt(&s, dt).unwrap().0;
        }
        let err: Vec<f64> = g.centers().iter().enumerate().map(|(i, &x)| s.n[i] - w.sample(t_end, x).n).collect();
        g.l2_norm(&err)
    }

    #[test]
    fn smooth_simple_wave_converges_near_second_order() {
        // minmod clips the extremum, so the L2 order approaches 2 from below
        let e: Vec<f64> = [200, 400, 800].iter().map(|&m| advect(m)).collect();
        let orders: Vec<f64> = e.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        assert!(orders.iter().all(|o| *o > 1.5) && orders[1] > orders[0], "{e:?} {orders:?}");
    }

    #[test]
    fn regime_changes_are_detected() {
        let g = Grid1D::uniform(1.0, 50).unwrap();
        let p = params(0.0, -2.0);
        let cfg = SolverConfig::default();
        let slow = PlasmaState::uniform(g.len(), 1.0, -1.25, 0.0);
        let lim = Stepper::new(&g, &p, &cfg, Regime::Supersonic, System::QuasineutralLimit).unwrap();
        assert!(matches!(lim.step(&slow), Err(Error::RegimeMismatch { .. })));
        let ep = Stepper::new(&g, &p, &cfg, Regime::Supersonic, System::EulerPoisson).unwrap();
        assert!(matches!(ep.step(&slow), Err(Error::BohmLost { .. })));
    }
}
