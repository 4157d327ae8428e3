use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expansion::{Bump, Expansion, LeadingOrder, SimpleWave};
use crate::model::{Grid1D, LayerGridSpec, Parameters, PlasmaState, Regime};
use crate::sheath::LayerContext;

/// Mesh controls shared by every run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub length: f64,
    /// Width of the bulk cells, common to all `eps`.
    pub bulk_dx: f64,
    /// Wall-zone cells are no wider than `eps / cells_per_eps`.
    pub cells_per_eps: f64,
    /// Wall zone covers `fine_zone_factor * eps / gamma0`.
    pub fine_zone_factor: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { length: 1.5, bulk_dx: 6.25e-4, cells_per_eps: 10.0, fine_zone_factor: 10.0 }
    }
}

/// Initial data of an experiment: a slow simple wave of the limit system
/// on top of the reference state, with the wall potential of `params`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: Parameters,
    pub regime: Regime,
    pub bump: Bump,
    pub grid: GridConfig,
}

impl Scenario {
    /// `Ti = 1`, `w_ref = -2`, `delta = 0.05`, `T = 0.1`; the bump enters the
    /// layer at `t ~ 0.015`.
    pub fn supersonic() -> Self {
        Self {
            params: Parameters { phi_c: 0.05, w_ref: -2.0, ..Parameters::default() },
            regime: Regime::Supersonic,
            bump: Bump { center: 0.45, width: 0.4, amplitude: 0.1 },
            grid: GridConfig::default(),
        }
    }

    /// `Ti = 1`, `u3 = -1.25`, data compatible with `n(0) = e^{-phi_b}`; the
    /// bump reaches the wall at `t ~ 0.008` and reflects into the fast family.
    /// The amplitude stays small so the reflected state remains intermediate.
    pub fn intermediate() -> Self {
        Self {
            params: Parameters { phi_c: 0.0, w_ref: -1.25, ..Parameters::default() },
            regime: Regime::Intermediate,
            bump: Bump { center: 0.52, width: 0.5, amplitude: 0.04 },
            grid: GridConfig::default(),
        }
    }

    pub fn for_regime(regime: Regime) -> Self {
        match regime {
            Regime::Intermediate => Self::intermediate(),
            _ => Self::supersonic(),
        }
    }

    pub fn wave(&self) -> Result<SimpleWave> {
        SimpleWave::new(self.params.ion_temperature, self.params.n_ref, self.params.w_ref, self.bump)
    }

    pub fn params_for(&self, eps: f64) -> Parameters {
        self.params.with_epsilon(eps)
    }

    /// Decay rate of the leading layer in `x3 / eps` at `t = 0`, or
    /// `params.gamma0` when there is no layer.
    pub fn layer_rate(&self) -> Result<f64> {
        if self.regime != Regime::Supersonic {
            return Ok(self.params.gamma0);
        }
        let tr = self.wave()?.sample(0.0, 0.0);
        Ok(LayerContext::from_traces(tr.n, tr.u3, self.params.ion_temperature, self.params.phi_b())?.gamma_prefactored())
    }

    pub fn bulk_grid(&self) -> Result<Grid1D> {
        Grid1D::uniform(self.grid.length, (self.grid.length / self.grid.bulk_dx).round().max(1.0) as usize)
    }

    /// Layer grid for `eps`; it nests into [`Self::bulk_grid`].
    pub fn eps_grid(&self, eps: f64) -> Result<Grid1D> {
        let spec = LayerGridSpec { fine_zone_factor: self.grid.fine_zone_factor, cells_per_eps: self.grid.cells_per_eps };
        Grid1D::layer(self.grid.length, eps, self.layer_rate()?, self.grid.bulk_dx, spec)
    }

    /// Expansion of order `order` for `eps` around the simple wave.
    pub fn expansion(&self, eps: f64, order: u32) -> Result<Expansion<SimpleWave>> {
        let p = Parameters { expansion_order: order, ..self.params_for(eps) };
        Expansion::new(&p, self.wave()?)
    }

    /// Limit-system data sampled at the cell centres.
    pub fn limit_initial(&self, grid: &Grid1D) -> Result<PlasmaState> {
        let w = self.wave()?;
        let mut s = PlasmaState::zeros(grid.len());
        for (i, &x) in grid.centers().iter().enumerate() {
            let r = w.sample(0.0, x);
            s.n[i] = r.n;
            s.u3[i] = r.u3;
            s.phi[i] = r.phi;
        }
        Ok(s)
    }

    /// Data of the `eps` runs: the assembled first-order expansion at `t = 0`
    /// in the supersonic case, the limit data otherwise. The potential is
    /// only a starting guess for the initial Poisson solve.
    pub fn eps_initial(&self, eps: f64, grid: &Grid1D) -> Result<PlasmaState> {
        if self.regime != Regime::Supersonic {
            return self.limit_initial(grid);
        }
        let e = self.expansion(eps, 1)?;
        let a = e.assemble(grid.centers(), 0.0)?;
        let mut s = PlasmaState::zeros(grid.len());
        s.n = a.n;
        s.u3 = a.u3;
        s.phi = a.phi;
        Ok(s)
    }
}
