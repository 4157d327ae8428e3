//! Euler-Poisson run from the assembled first-order expansion, writing
//! snapshots every 0.025 time units to `ep_solution.csv`.
//!
//! ```text
//! cargo run --release --example ep_solve
//! ```

use std::fs::File;
use std::io::BufWriter;

use sheathlab::epsolve::{run, SnapshotWriter, SolverConfig, Stepper, System};
use sheathlab::harness::Scenario;

fn main() -> sheathlab::Result<()> {
    let sc = Scenario::supersonic();
    let eps = 0.005;
    let grid = sc.eps_grid(eps)?;
    let params = sc.params_for(eps);
    let st = Stepper::new(&grid, &params, &SolverConfig::default(), sc.regime, System::EulerPoisson)?;

    let mut wall = Vec::new();
    let mut trace = |s: &sheathlab::PlasmaState| -> sheathlab::Result<()> {
        wall.push((s.time, s.n[0], s.u3[0], s.phi[0]));
        Ok(())
    };
    let mut csv = SnapshotWriter::new(BufWriter::new(File::create("ep_solution.csv")?), &grid)?;
    let out = run(&st, sc.eps_initial(eps, &grid)?, params.final_time, Some(0.025), &mut [&mut csv, &mut trace])?;

    println!("eps = {eps}: {} cells, {} steps", grid.len(), out.steps);
    println!("Newton: {} initial, {} max per stage", out.initial_newton_iterations, out.max_newton_iterations);
    println!("max Poisson residual {:.2e}, max mass defect {:.2e}", out.max_poisson_residual, out.max_mass_defect);
    println!("{:>7} {:>10} {:>10} {:>10}", "t", "n(0)", "u3(0)", "phi(0)");
    for (t, n, u, phi) in wall {
        println!("{t:>7.3} {n:>10.6} {u:>10.6} {phi:>10.6}");
    }
    println!("snapshots written to ep_solution.csv");
    Ok(())
}
