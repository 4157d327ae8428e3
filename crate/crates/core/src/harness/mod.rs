//! Experiments, reports and the command-line front end.

mod classify;
mod cli;
pub mod config;
mod converge;
mod ladder;
mod scenario;
mod stability;

pub use classify::{classify_report, render_table, RegimeRow};
pub use cli::{cli_main, EXIT_CHECK, EXIT_CONFIG, EXIT_OK, EXIT_SOLVER};
pub use config::{ExperimentConfig, ExperimentKind, ExperimentSection};
pub use converge::{
    converge, eps_solution, fit_rate, limit_solution, Check, FitSummary, RateFits, RateReport, INTERMEDIATE_L2_SLOPE,
    INTERMEDIATE_LINF_SLOPE, MIN_R_SQUARED, PERSISTENCE_FRACTION, SUPERSONIC_L2_SLOPE,
};
pub use ladder::{residual_ladder, LadderRung, ResidualLadder, DERIVATIVE_SPREAD, REDUCTION_RANGE};
pub use scenario::{GridConfig, Scenario};
pub use stability::{
    smooth_perturbation, stability, EnergySample, StabilityReport, StabilityRun, GROWTH_SPREAD, PERTURBATION_SCALE, PERTURBATION_SEED,
};

/// Supersonic rate experiment over `sweep` with the default scenario.
pub fn converge_supersonic(sweep: &[f64], solver: &crate::epsolve::SolverConfig) -> crate::Result<RateReport> {
    converge(&Scenario::supersonic(), sweep, solver)
}

/// Intermediate rate experiment over `sweep` with the default scenario.
pub fn converge_intermediate(sweep: &[f64], solver: &crate::epsolve::SolverConfig) -> crate::Result<RateReport> {
    converge(&Scenario::intermediate(), sweep, solver)
}
