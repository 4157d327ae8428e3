use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{classify_report, converge, render_table, residual_ladder, stability, Check};
use crate::epsolve::{run, RunSummary, SnapshotWriter, Stepper, System};
use crate::error::{Error, Result};
use crate::model::Regime;
use crate::sheath::{admissible_window, solve_phi0, LayerContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sheathlab", about = "Sheath layers and the quasineutral limit of isothermal Euler-Poisson")]
struct Cli {
    /// Experiment file with [params], [grid], [solver] and [experiment].
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `experiment.output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    Supersonic,
    Intermediate,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Supersonic => Regime::Supersonic,
            RegimeArg::Intermediate => Regime::Intermediate,
        }
    }
}

#[derive(Debug, Args)]
struct RegimeOpt {
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Leading-order sheath profile and its decay rate.
    Profile {
        #[arg(long = "Ti", default_value_t = 1.0)]
        ti: f64,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        u3: f64,
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        phi0: f64,
        #[arg(long, default_value_t = 1.0)]
        n0: f64,
        /// Profile length in units of `1 / gamma`.
        #[arg(long, default_value_t = 40.0)]
        decay_lengths: f64,
    },
    /// Euler-Poisson run at `params.epsilon`.
    Solve {
        #[command(flatten)]
        regime: RegimeOpt,
    },
    /// Quasineutral limit run.
    Limit {
        #[command(flatten)]
        regime: RegimeOpt,
    },
    /// Convergence rates over the eps sweep.
    Converge {
        #[command(flatten)]
        regime: RegimeOpt,
        /// Exit with status 4 when a rate check fails.
        #[arg(long)]
        check: bool,
    },
    /// Weighted energy of a small perturbation over the eps sweep.
    Stability {
        #[arg(long)]
        check: bool,
    },
    /// Outflow classification table.
    Classify,
    /// Residuals of the order 0 and 1 expansions over the eps sweep.
    Residual {
        #[arg(long)]
        check: bool,
    },
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Profile { .. } => ExperimentKind::Profile,
            Command::Solve { .. } => ExperimentKind::Solve,
            Command::Limit { .. } => ExperimentKind::Limit,
            Command::Converge { .. } => ExperimentKind::Converge,
            Command::Stability { .. } => ExperimentKind::Stability,
            Command::Classify => ExperimentKind::Classify,
            Command::Residual { .. } => ExperimentKind::Residual,
        }
    }

    fn regime(&self) -> Option<Regime> {
        match self {
            Command::Solve { regime } | Command::Limit { regime } | Command::Converge { regime, .. } => regime.regime.map(Into::into),
            _ => None,
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::defaults(cli.command.kind(), cli.command.regime().unwrap_or(Regime::Supersonic)),
    };
    if let Some(r) = cli.command.regime() {
        if r != cfg.experiment.regime {
            return Err(Error::Config(format!("--regime {} conflicts with the config file", r.name())));
        }
    }
    if let Some(out) = &cli.out {
        cfg.experiment.output_dir = out.clone();
    }
    cfg.experiment.kind = cli.command.kind();
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut out = create(dir, name)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn summary_json(cfg: &ExperimentConfig, system: &str, s: &RunSummary) -> serde_json::Value {
    json!({
        "system": system,
        "regime": cfg.experiment.regime,
        "params": cfg.params,
        "solver": cfg.solver,
        "final_time": s.state.time,
        "steps": s.steps,
        "initial_newton_iterations": s.initial_newton_iterations,
        "max_newton_iterations": s.max_newton_iterations,
        "max_poisson_residual": s.max_poisson_residual,
        "max_mass_defect": s.max_mass_defect,
    })
}

fn report_checks(checks: &[Check]) -> bool {
    for c in checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

fn profile(dir: &Path, ti: f64, u3: f64, phi0: f64, n0: f64, decay_lengths: f64) -> Result<()> {
    let ctx = LayerContext::new(n0, u3, ti, phi0)?;
    let p = solve_phi0(&ctx, decay_lengths / ctx.gamma_prefactored(), 1e-8)?;
    let mut csv = create(dir, "profile.csv")?;
    p.write_csv(&mut csv)?;
    csv.flush()?;
    let window = admissible_window(&ctx);
    let report = json!({
        "ti": ti,
        "u3": u3,
        "n0": n0,
        "phi0": phi0,
        "gamma": ctx.gamma(),
        "gamma_prefactored": ctx.gamma_prefactored(),
        "measured_decay_rate": p.measured_decay_rate,
        "relative_decay_error": (p.measured_decay_rate / ctx.gamma_prefactored() - 1.0).abs(),
        "hamiltonian_defect": p.hamiltonian_defect()?,
        "flux_defect": p.flux_defect(),
        "admissible_window": window,
    });
    write_json(dir, "report.json", &report)?;
    println!("gamma {:.6} measured {:.6}", ctx.gamma_prefactored(), p.measured_decay_rate);
    Ok(())
}

fn simulate(cfg: &ExperimentConfig, system: System) -> Result<()> {
    let sc = cfg.scenario();
    let dir = &cfg.experiment.output_dir;
    let (grid, params, init, name) = match system {
        System::EulerPoisson => {
            let g = sc.eps_grid(cfg.params.epsilon)?;
            let init = sc.eps_initial(cfg.params.epsilon, &g)?;
            (g, cfg.params, init, "euler_poisson")
        }
        System::QuasineutralLimit => {
            let g = sc.bulk_grid()?;
            let init = sc.limit_initial(&g)?;
            (g, cfg.params, init, "limit")
        }
    };
    let st = Stepper::new(&grid, &params, &cfg.solver, sc.regime, system)?;
    let mut writer = SnapshotWriter::new(create(dir, "solution.csv")?, &grid)?;
    let summary = run(&st, init, params.final_time, cfg.experiment.snapshot_every, &mut [&mut writer])?;
    writer.into_inner().flush()?;
    write_json(dir, "report.json", &summary_json(cfg, name, &summary))?;
    println!("{name}: {} steps, max Newton {}", summary.steps, summary.max_newton_iterations);
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    if let Command::Profile { ti, u3, phi0, n0, decay_lengths } = cli.command {
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        profile(&dir, ti, u3, phi0, n0, decay_lengths)?;
        return Ok(true);
    }
    let cfg = load_config(cli)?;
    let dir = cfg.experiment.output_dir.clone();
    let sweep = &cfg.experiment.eps_sweep;
    match &cli.command {
        Command::Profile { .. } => unreachable!(),
        Command::Solve { .. } => simulate(&cfg, System::EulerPoisson).map(|_| true),
        Command::Limit { .. } => simulate(&cfg, System::QuasineutralLimit).map(|_| true),
        Command::Converge { check, .. } => {
            let report = converge(&cfg.scenario(), sweep, &cfg.solver)?;
            let mut csv = create(&dir, "rates.csv")?;
            report.write_csv(&mut csv)?;
            csv.flush()?;
            let checks = report.checks();
            write_json(&dir, "report.json", &json!({ "report": report, "checks": checks }))?;
            for name in &report.flagged {
                println!("flagged fit {name}: R^2 below {}", super::MIN_R_SQUARED);
            }
            Ok(report_checks(&checks) || !check)
        }
        Command::Stability { check } => {
            let report = stability(&cfg.scenario(), sweep, &cfg.solver, cfg.experiment.sample_every)?;
            let mut csv = create(&dir, "energy.csv")?;
            writeln!(csv, "eps,t,energy")?;
            for r in &report.runs {
                for s in &r.samples {
                    writeln!(csv, "{:e},{:.10e},{:.10e}", r.eps, s.t, s.energy)?;
                }
            }
            csv.flush()?;
            write_json(&dir, "report.json", &report)?;
            let ok = report_checks(&[Check {
                name: "energy_growth_bounded",
                passed: report.bounded,
                detail: format!("C = {:.4}", report.growth_bound),
            }]);
            Ok(ok || !check)
        }
        Command::Classify => {
            let rows = classify_report();
            print!("{}", render_table(&rows));
            write_json(&dir, "classification.json", &rows)?;
            Ok(true)
        }
        Command::Residual { check } => {
            let t = cfg.experiment.residual_time.unwrap_or(cfg.params.final_time);
            let ladder = residual_ladder(&cfg.scenario(), sweep, t)?;
            let mut csv = create(&dir, "ladder.csv")?;
            writeln!(csv, "eps,l2_order0,l2_order1,ratio,scaled_derivative")?;
            for r in &ladder.rungs {
                writeln!(csv, "{:e},{:.10e},{:.10e},{:.10e},{:.10e}", r.eps, r.l2_order0, r.l2_order1, r.ratio, r.scaled_derivative)?;
            }
            csv.flush()?;
            write_json(&dir, "report.json", &ladder)?;
            let ok = report_checks(&[Check {
                name: "residual_ladder",
                passed: ladder.passed,
                detail: format!("reductions {:?}, derivative spread {:.3}", ladder.reductions, ladder.derivative_spread),
            }]);
            Ok(ok || !check)
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_SOLVER,
            }
        }
    }
}
