//! Positivity certificates of the energy quadratic forms, then the weighted
//! energy of a seeded perturbation over a short sweep.
//!
//! ```text
//! cargo run --release --example stability_certificates
//! ```

use sheathlab::diagnostics::{form_report, FormKind, StabilityTrace};
use sheathlab::epsolve::SolverConfig;
use sheathlab::harness::{stability, Scenario};

fn main() -> sheathlab::Result<()> {
    for u3 in [-2.0, -1.5, -1.3] {
        let tr = StabilityTrace::neutral(1.0, u3, 1.0);
        println!("trace n = 1, u3 = {u3}, Ti = 1");
        for kind in FormKind::ALL {
            let r = form_report(kind, &tr, 0.0, 1.0);
            let minors: Vec<String> = r.minors.iter().map(|m| format!("{m:.4}")).collect();
            println!("  {:<5} positive {:<5} mu* {:.4}  minors [{}]", r.matrix, r.positive, r.mu_critical, minors.join(", "));
        }
    }

    let report = stability(&Scenario::supersonic(), &[0.02, 0.01, 0.005], &SolverConfig::default(), 0.01)?;
    println!("\nperturbation energy, amplitude 1e-6 eps, seed {:#x}", report.seed);
    for run in &report.runs {
        let last = run.samples.last().expect("samples");
        println!("  eps {:<6} E(0) {:.3e}  E({}) {:.3e}  C {:+.4}", run.eps, run.samples[0].energy, last.t, last.energy, run.growth_rate);
    }
    println!("one C for the sweep: {:.4}, bounded: {}", report.growth_bound, report.bounded);
    Ok(())
}
