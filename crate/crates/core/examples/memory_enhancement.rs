//! Two-use metrics for the rho_pq family as memory grows (fe, se, ic panels).
//!
//!     cargo run --example memory_enhancement -- 0.5

use dephaser::infometrics::{two_use_family_metrics, PqInput};
use dephaser::DephasingParams;

fn main() -> dephaser::Result<()> {
    let g: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);
    println!("g = {g}");
    println!(
        "{:>6} {:>5} {:>9} {:>9} {:>9}",
        "gamma", "p", "fe", "se", "ic"
    );
    for gamma in [0.0, 0.5, 1.0] {
        let params = DephasingParams::from_factors(g, gamma)?;
        for i in 0..=5 {
            let p = i as f64 / 5.0;
            let m = two_use_family_metrics(PqInput::new(p)?, &params);
            println!(
                "{gamma:>6.2} {p:>5.2} {:>9.6} {:>9.6} {:>9.6}",
                m.fe, m.se, m.ic
            );
        }
    }
    Ok(())
}
