//! Leading-order sheath profile for a few wall values, with the measured
//! tail decay against `gamma`.
//!
//! ```text
//! cargo run --release --example sheath_profile
//! ```

use sheathlab::sheath::{admissible_window, solve_phi0, LayerContext};

fn main() -> sheathlab::Result<()> {
    let (ti, u3) = (1.0, -2.0);
    let probe = LayerContext::new(1.0, u3, ti, 0.0)?;
    let window = admissible_window(&probe);
    println!("Ti = {ti}, u3 = {u3}: Phi0(0) admissible in [{:.4}, {:.4}]", window.lo, window.hi);
    println!("{:>8} {:>10} {:>10} {:>12} {:>12}", "Phi0(0)", "gamma", "measured", "N0(0)", "H defect");
    for phi0 in [-0.3, -0.1, 0.05, 0.1, 0.5] {
        let ctx = LayerContext::new(1.0, u3, ti, phi0)?;
        let p = solve_phi0(&ctx, 40.0 / ctx.gamma(), 1e-8)?;
        println!("{phi0:>8.3} {:>10.6} {:>10.6} {:>12.6} {:>12.3e}", ctx.gamma(), p.measured_decay_rate, p.n0[0], p.hamiltonian_defect()?);
    }
    let ctx = LayerContext::new(1.0, u3, ti, 0.1)?;
    let p = solve_phi0(&ctx, 40.0 / ctx.gamma(), 1e-8)?;
    println!("\nprofile CSV, every 200th row:");
    let mut buf = Vec::new();
    p.write_csv(&mut buf)?;
    let text = String::from_utf8_lossy(&buf);
    let mut lines = text.lines();
    println!("{}", lines.next().unwrap_or_default());
    for line in lines.step_by(200).take(7) {
        println!("{line}");
    }
    Ok(())
}
