//! Residual of the order 0 and 1 expansions in the full system. Each
//! halving of `eps` halves the ratio of the two, and `eps d3` of the
//! residual is comparable to the residual itself.
//!
//! ```text
//! cargo run --release --example residual_ladder
//! ```

use sheathlab::harness::{residual_ladder, Scenario};

fn main() -> sheathlab::Result<()> {
    let sc = Scenario::supersonic();
    let ladder = residual_ladder(&sc, &[0.02, 0.01, 0.005], sc.params.final_time)?;
    println!("{:>7} {:>11} {:>11} {:>10} {:>12}", "eps", "|R(K=0)|", "|R(K=1)|", "ratio", "eps|dR|/|R|");
    for r in &ladder.rungs {
        println!("{:>7} {:>11.3e} {:>11.3e} {:>10.4} {:>12.4}", r.eps, r.l2_order0, r.l2_order1, r.ratio, r.scaled_derivative);
    }
    println!("reduction per halving {:?}; passed: {}", ladder.reductions, ladder.passed);
    Ok(())
}
