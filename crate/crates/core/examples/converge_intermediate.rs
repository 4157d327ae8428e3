//! Intermediate convergence sweep: no sheath, so `L2` and `Linf` errors
//! both vanish as `eps -> 0`.
//!
//! ```text
//! cargo run --release --example converge_intermediate
//! ```

use sheathlab::epsolve::SolverConfig;
use sheathlab::harness::{converge_intermediate, ExperimentKind, ExperimentSection};

fn main() -> sheathlab::Result<()> {
    let sweep = ExperimentSection::new(ExperimentKind::Converge).eps_sweep;
    let report = converge_intermediate(&sweep, &SolverConfig::default())?;
    report.write_csv(std::io::stdout())?;
    let f = &report.fits;
    println!(
        "slopes: L2 n {:.3} (R^2 {:.4}), L2 u {:.3}, Linf {:.3} (R^2 {:.4})",
        f.l2_n.slope, f.l2_n.r_squared, f.l2_u.slope, f.linf_raw.slope, f.linf_raw.r_squared
    );
    for c in report.checks() {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
