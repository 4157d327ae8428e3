//! Parameters, meshes, field containers and regime detection shared by the
//! solvers.

mod grid;
mod params;
mod regime;
mod state;

pub use grid::{build_grid, Grid1D, LayerGridSpec};
pub use params::Parameters;
pub use regime::{classify_regime, classify_with_speeds, Regime, DEFAULT_SONIC_MARGIN};
pub use state::PlasmaState;
