//! Assembles the first-order boundary-layer expansion around a simple wave
//! and checks the wall condition it satisfies.
//!
//! ```text
//! cargo run --release --example assembled_expansion
//! ```

use sheathlab::harness::Scenario;

fn main() -> sheathlab::Result<()> {
    let sc = Scenario::supersonic();
    let eps = 0.01;
    for order in [0, 1] {
        let e = sc.expansion(eps, order)?;
        for t in [0.0, 0.05, 0.1] {
            println!("K = {order}, t = {t:<4}: |phi_a(0) - phi_b| = {:.3e}", e.dirichlet_defect(t)?);
        }
    }
    let e = sc.expansion(eps, 1)?;
    let x: Vec<f64> = (0..=8).map(|k| k as f64 * 0.5 * eps).collect();
    let a = e.assemble(&x, 0.05)?;
    println!("\n{:>8} {:>10} {:>10} {:>10}", "x3/eps", "n", "u3", "phi");
    for (i, x) in x.iter().enumerate() {
        println!("{:>8.2} {:>10.6} {:>10.6} {:>10.6}", x / eps, a.n[i], a.u3[i], a.phi[i]);
    }
    Ok(())
}
