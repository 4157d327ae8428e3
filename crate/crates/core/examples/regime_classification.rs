//! Classification of wall traces and the outflow table.
//!
//! ```text
//! cargo run --release --example regime_classification
//! ```

use sheathlab::harness::{classify_report, render_table};
use sheathlab::model::DEFAULT_SONIC_MARGIN;
use sheathlab::{classify_regime, sheath};

fn main() -> sheathlab::Result<()> {
    let ti = 1.0;
    for u3 in [-2.5, -2.0, -1.42, -1.3, -1.1, -0.5, 0.0] {
        let label = match classify_regime(u3, ti, DEFAULT_SONIC_MARGIN) {
            Ok(r) => r.name().to_string(),
            Err(e) => format!("rejected ({e})"),
        };
        let gamma = sheath::decay_rate(ti, u3).map_or("-".to_string(), |g| format!("{g:.5}"));
        println!("u3 = {u3:>5}: {label:<28} layer decay rate {gamma}");
    }
    println!();
    print!("{}", render_table(&classify_report()));
    Ok(())
}
