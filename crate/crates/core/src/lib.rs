//! Boundary layers (sheaths) and the quasineutral limit of the isothermal
//! Euler–Poisson system for ions on a half-line.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters, layer-resolving meshes, field containers and the
//!   outflow regime of a wall trace.
//! - [`sheath`]: the algebraic map `F`, its inverse, the autonomous layer ODE
//!   for the leading potential profile and the linear problem for the first
//!   corrector.
//! - [`expansion`]: regular plus stretched layer parts assembled into an
//!   approximate solution, and its residual in the full system.
//! - [`epsolve`]: finite-volume time stepping of the `eps > 0` system and of
//!   its quasineutral limit.
//! - [`diagnostics`]: convective weight, Sylvester certificates of the
//!   stability quadratic forms, weighted energies and `H^m_eps` norms.
//! - [`harness`]: configuration, convergence experiments, reports and the
//!   command-line front end.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod diagnostics;
pub mod epsolve;
pub mod error;
pub mod expansion;
pub mod harness;
pub mod model;
pub mod numerics;
pub mod sheath;

pub use error::{Error, Result};
pub use model::{build_grid, classify_regime, Grid1D, Parameters, PlasmaState, Regime};
