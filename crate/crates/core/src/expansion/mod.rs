//! Approximate solutions `(n_a, u_a, phi_a)` built from a regular part and
//! stretched boundary-layer parts, and their residual in the full system.
//!
//! At order `K` the density reads
//! `n_a(t, x) = sum_{i <= K} eps^i (n^i(t, x) + N^i(t, x/eps))`, and likewise
//! for the velocity and the potential. The leading regular part is any
//! solution of the quasineutral limit system ([`LeadingOrder`]); the layer
//! parts come from [`crate::sheath`] with the wall traces of the regular part
//! at each time.
//!
//! The regular first-order coefficients solve a linear hyperbolic system with
//! no source and zero data, so they vanish; [`solve_regular_corrector`]
//! integrates that system for general sources.

mod regular;
mod residual;
mod simple_wave;

use std::io::Write;

pub use regular::{solve_regular_corrector, CorrectorFields, CorrectorSource};
pub use residual::{residual, Residual, ResidualOptions};
pub use simple_wave::{Bump, LeadingOrder, RegularSample, SimpleWave};

use crate::error::{Error, Result};
use crate::model::{Parameters, PlasmaState};
use crate::sheath::{assemble_f6, solve_phi0_with, solve_phi1, LayerContext, ProfileOptions, RegularTrace, SheathProfile};

/// Tail magnitude at which layer profiles switch to the exponential tail.
pub const LAYER_TAIL_TOL: f64 = 1e-8;

/// Expansion of order `K in {0, 1}` around a leading-order regular solution.
#[derive(Debug, Clone)]
pub struct Expansion<R> {
    params: Parameters,
    regular: R,
    order: u32,
    z_max: f64,
    profile_options: ProfileOptions,
    layer_dt: f64,
    with_layer: bool,
}

impl<R: LeadingOrder> Expansion<R> {
    /// Order taken from `params.expansion_order`. Layer profiles extend to
    /// `z_max = 45 / gamma` of the wall trace at `t = 0`.
    pub fn new(params: &Parameters, regular: R) -> Result<Self> {
        params.validate()?;
        let trace = regular.sample(0.0, 0.0);
        let ctx = LayerContext::from_traces(trace.n, trace.u3, params.ion_temperature, params.phi_b())?;
        Ok(Self {
            params: *params,
            regular,
            order: params.expansion_order,
            z_max: 45.0 / ctx.gamma_prefactored(),
            profile_options: ProfileOptions::default(),
            layer_dt: 1e-4 * params.final_time,
            with_layer: true,
        })
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self
    }

    /// Drops every layer part, leaving the regular expansion.
    pub fn without_layer(mut self) -> Self {
        self.with_layer = false;
        self
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn regular(&self) -> &R {
        &self.regular
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn context(&self, t: f64) -> Result<LayerContext> {
        let trace = self.regular.sample(t, 0.0);
        LayerContext::from_traces(trace.n, trace.u3, self.params.ion_temperature, self.params.phi_b())
    }

    /// Wall traces of the regular part that enter the first layer corrector.
    pub fn regular_trace(&self, t: f64) -> RegularTrace {
        let s = self.regular.sample(t, 0.0);
        RegularTrace { n1: 0.0, u13: 0.0, phi1: 0.0, dn0: s.dn, du03: s.du3, dphi0: s.dphi }
    }

    fn leading_profile(&self, t: f64) -> Result<SheathProfile> {
        solve_phi0_with(&self.context(t)?, self.z_max, LAYER_TAIL_TOL, &self.profile_options)
    }

    /// Layer profiles at time `t`, including the first corrector when `K = 1`.
    pub fn layer(&self, t: f64) -> Result<SheathProfile> {
        let mut profile = self.leading_profile(t)?;
        if self.order >= 1 {
            let before = self.leading_profile(t - self.layer_dt)?;
            let after = self.leading_profile(t + self.layer_dt)?;
            let trace = self.regular_trace(t);
            let sources = assemble_f6(&profile, &before, &after, self.layer_dt, &trace)?;
            let phi1 = solve_phi1(&profile, &sources.f6, -trace.phi1)?;
            profile.attach_first_order(phi1, &sources, &trace);
        }
        Ok(profile)
    }

    /// Approximate solution at the points `x3` using precomputed layer
    /// profiles for the same time.
    pub fn assemble_with(&self, layer: Option<&SheathProfile>, x3: &[f64], t: f64) -> PlasmaState {
        let eps = self.params.epsilon;
        let sampler = layer.filter(|_| self.with_layer).map(|p| p.sampler());
        let mut state = PlasmaState::zeros(x3.len());
        state.time = t;
        for (i, &x) in x3.iter().enumerate() {
            let r = self.regular.sample(t, x);
            let (mut n, mut u, mut phi) = (r.n, r.u3, r.phi);
            if let Some(s) = &sampler {
                let l = s.sample(x / eps);
                n += l.n0;
                u += l.u03;
                phi += l.phi0;
                if self.order >= 1 {
                    n += eps * l.n1;
                    u += eps * l.u13;
                    phi += eps * l.phi1;
                }
            }
            state.n[i] = n;
            state.u3[i] = u;
            state.phi[i] = phi;
        }
        state
    }

    pub fn assemble(&self, x3: &[f64], t: f64) -> Result<PlasmaState> {
        if !self.with_layer {
            return Ok(self.assemble_with(None, x3, t));
        }
        let layer = self.layer(t)?;
        Ok(self.assemble_with(Some(&layer), x3, t))
    }

    /// `|phi_a(t, 0) - phi_b|`.
    pub fn dirichlet_defect(&self, t: f64) -> Result<f64> {
        let s = self.assemble(&[0.0], t)?;
        Ok((s.phi[0] - self.params.phi_b()).abs())
    }

    /// Checks that the layer profile has decayed below `1e-8` at `x3 = length`.
    pub fn check_layer_decay(&self, t: f64, length: f64) -> Result<()> {
        if !self.with_layer {
            return Ok(());
        }
        let layer = self.layer(t)?;
        let s = layer.sampler().sample(length / self.params.epsilon);
        let worst = s.phi0.abs().max(s.n0.abs()).max(s.u03.abs());
        if worst > 1e-8 {
            return Err(Error::InvalidMesh(format!("layer still {worst:e} at x3 = {length}")));
        }
        Ok(())
    }
}

/// CSV with columns `x3, n_a, u1_a, u2_a, u3_a, phi_a`.
pub fn write_state_csv<W: Write>(x3: &[f64], state: &PlasmaState, mut out: W) -> Result<()> {
    writeln!(out, "x3,n_a,u1_a,u2_a,u3_a,phi_a")?;
    for i in 0..x3.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            x3[i], state.n[i], state.u1[i], state.u2[i], state.u3[i], state.phi[i]
        )?;
    }
    Ok(())
}
