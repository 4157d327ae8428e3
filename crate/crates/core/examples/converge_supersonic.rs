//! Supersonic convergence sweep: `L2` errors shrink like `sqrt(eps)`, the
//! raw `Linf` error stays put because of the sheath, and removing the
//! leading layer profile makes it converge.
//!
//! ```text
//! cargo run --release --example converge_supersonic
//! ```

use sheathlab::epsolve::SolverConfig;
use sheathlab::harness::{converge_supersonic, ExperimentKind, ExperimentSection};

fn main() -> sheathlab::Result<()> {
    let sweep = ExperimentSection::new(ExperimentKind::Converge).eps_sweep;
    let report = converge_supersonic(&sweep, &SolverConfig::default())?;
    report.write_csv(std::io::stdout())?;
    let f = &report.fits;
    println!(
        "slopes: L2 n {:.3} +- {:.3}, L2 u {:.3}, Linf raw {:.3}, Linf corrected {:.3}",
        f.l2_n.slope, f.l2_n.stderr, f.l2_u.slope, f.linf_raw.slope, f.linf_corrected.slope
    );
    for c in report.checks() {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
