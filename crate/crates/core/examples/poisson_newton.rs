//! Newton solve of `eps^2 phi'' + e^{-phi} = n` on a layer-refined mesh,
//! cold and warm started.
//!
//! ```text
//! cargo run --release --example poisson_newton
//! ```

use sheathlab::epsolve::{newton_poisson, PoissonBc, SolverConfig};
use sheathlab::{build_grid, Parameters};

fn main() -> sheathlab::Result<()> {
    let cfg = SolverConfig::default();
    for eps in [0.02, 0.005, 0.001] {
        let p = Parameters { epsilon: eps, ..Parameters::default() };
        let grid = build_grid(1.5, eps, p.gamma0, 6.25e-4)?;
        let n: Vec<f64> = grid.centers().iter().map(|x| 1.0 + 0.1 * (-((x - 0.5) / 0.1).powi(2)).exp()).collect();
        let bc = PoissonBc::from_params(&p);
        let cold = newton_poisson(&n, &grid, eps, &bc, &cfg, None)?;
        let bumped: Vec<f64> = n.iter().map(|v| v * 1.001).collect();
        let warm = newton_poisson(&bumped, &grid, eps, &bc, &cfg, Some(&cold.phi))?;
        let neutral = grid
            .centers()
            .iter()
            .zip(&cold.phi)
            .zip(&n)
            .filter(|((x, _), _)| **x > 0.2)
            .map(|((_, phi), n)| (phi + n.ln()).abs())
            .fold(0.0, f64::max);
        println!(
            "eps {eps:<6} cells {:>5}  cold {:>2} it (res {:.1e})  warm {} it  max|phi + ln n| past x = 0.2: {neutral:.2e}",
            grid.len(),
            cold.iterations,
            cold.residual,
            warm.iterations
        );
    }
    Ok(())
}
