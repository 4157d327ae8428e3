use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::{GridConfig, Scenario};
use crate::epsolve::SolverConfig;
use crate::error::{Error, Result};
use crate::expansion::Bump;
use crate::model::{Parameters, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Profile,
    Solve,
    Limit,
    Converge,
    Stability,
    Classify,
    Residual,
}

/// `[experiment]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default = "default_regime")]
    pub regime: Regime,
    #[serde(default = "default_sweep")]
    pub eps_sweep: Vec<f64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Replaces the bump of the regime's default scenario.
    #[serde(default)]
    pub bump: Option<Bump>,
    /// Snapshot interval of `solve` and `limit`; final state only when absent.
    #[serde(default)]
    pub snapshot_every: Option<f64>,
    /// Energy sampling interval of `stability`.
    #[serde(default = "default_sample_every")]
    pub sample_every: f64,
    /// Evaluation time of `residual`; the final time when absent.
    #[serde(default)]
    pub residual_time: Option<f64>,
}

fn default_regime() -> Regime {
    Regime::Supersonic
}

pub fn default_sweep() -> Vec<f64> {
    vec![0.02, 0.01, 0.005, 0.0025]
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_sample_every() -> f64 {
    0.005
}

impl ExperimentSection {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            regime: default_regime(),
            eps_sweep: default_sweep(),
            output_dir: default_output(),
            bump: None,
            snapshot_every: None,
            sample_every: default_sample_every(),
            residual_time: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    params: toml::Table,
    #[serde(default)]
    grid: toml::Table,
    #[serde(default)]
    solver: toml::Table,
    experiment: ExperimentSection,
}

/// A parsed experiment file. `[params]` and `[grid]` override the defaults
/// of the regime's scenario key by key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub params: Parameters,
    pub grid: GridConfig,
    pub solver: SolverConfig,
}

fn overlay<T: Serialize + DeserializeOwned>(base: &T, section: &str, table: toml::Table) -> Result<T> {
    let mut merged = toml::Table::try_from(base).map_err(|e| Error::Config(e.to_string()))?;
    merged.extend(table);
    toml::Value::Table(merged).try_into().map_err(|e: toml::de::Error| Error::Config(format!("[{section}]: {}", e.message())))
}

impl ExperimentConfig {
    /// Defaults of `kind` for `regime`.
    pub fn defaults(kind: ExperimentKind, regime: Regime) -> Self {
        let sc = Scenario::for_regime(regime);
        let experiment = ExperimentSection { regime, ..ExperimentSection::new(kind) };
        Self { experiment, params: sc.params, grid: sc.grid, solver: SolverConfig::default() }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        let sc = Scenario::for_regime(raw.experiment.regime);
        let cfg = Self {
            params: overlay(&sc.params, "params", raw.params)?,
            grid: overlay(&sc.grid, "grid", raw.grid)?,
            solver: overlay(&SolverConfig::default(), "solver", raw.solver)?,
            experiment: raw.experiment,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Sweep strictly decreasing with at least three entries; parameters
    /// and solver settings valid.
    pub fn validate(&self) -> Result<()> {
        let sweep = &self.experiment.eps_sweep;
        if sweep.len() < 3 {
            return Err(Error::Config("eps_sweep needs at least 3 entries".into()));
        }
        if sweep.iter().any(|e| !(*e > 0.0)) || sweep.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("eps_sweep must be positive and strictly decreasing".into()));
        }
        if self.experiment.regime == Regime::SubsonicOrCharacteristic {
            return Err(Error::Config("subsonic and characteristic outflow are not supported".into()));
        }
        if !(self.experiment.sample_every > 0.0) || self.experiment.snapshot_every.is_some_and(|h| !(h > 0.0)) {
            return Err(Error::Config("sampling intervals must be positive".into()));
        }
        let wrap = |e: Error| Error::Config(e.to_string());
        self.params.validate().map_err(wrap)?;
        self.solver.validate().map_err(wrap)?;
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        let mut sc = Scenario::for_regime(self.experiment.regime);
        sc.params = self.params;
        sc.grid = self.grid;
        if let Some(b) = self.experiment.bump {
            sc.bump = b;
        }
        sc
    }
}
