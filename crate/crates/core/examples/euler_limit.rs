//! The quasineutral limit system in both supported regimes. Supersonic
//! outflow needs no wall condition and reproduces the exact simple wave;
//! intermediate outflow holds `n(0) = e^{-phi_b}` and reflects the wave.
//!
//! ```text
//! cargo run --release --example euler_limit
//! ```

use sheathlab::epsolve::SolverConfig;
use sheathlab::expansion::LeadingOrder;
use sheathlab::harness::{limit_solution, Scenario};

fn main() -> sheathlab::Result<()> {
    let cfg = SolverConfig::default();
    for sc in [Scenario::supersonic(), Scenario::intermediate()] {
        let (grid, s) = limit_solution(&sc, &cfg)?;
        let t = sc.params.final_time;
        let w = sc.wave()?;
        let err: Vec<f64> = grid.centers().iter().zip(&s.n).map(|(&x, n)| n - w.sample(t, x).n).collect();
        println!(
            "{:<12} t = {t}: wall n {:.6} (e^-phi_b = {:.6}), u3 {:.6}, |n - simple wave|_L2 = {:.3e}",
            sc.regime.name(),
            s.n[0],
            (-sc.params.phi_b()).exp(),
            s.u3[0],
            grid.l2_norm(&err)
        );
    }
    Ok(())
}
