//! One channel use on a few Bloch inputs: closed forms next to the purified evolution.
//!
//!     cargo run --example single_use -- 0.5

use dephaser::infometrics::{pipeline_metrics, single_use_closed_forms, BlochInput};
use dephaser::DephasingMap;

fn main() -> dephaser::Result<()> {
    let g: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);
    let map = DephasingMap::single_use(g)?;
    println!("g = {g}");
    println!(
        "{:>5} {:>5} | {:>9} {:>9} {:>9} | {:>9} {:>9} {:>9}",
        "z", "r", "fe", "se", "ic", "fe*", "se*", "ic*"
    );
    for (z, r) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.8), (0.6, 0.8), (1.0, 0.0)] {
        let input = BlochInput::new(z, r)?;
        let c = single_use_closed_forms(g, input)?;
        let d = pipeline_metrics(&input.state(), &map)?;
        println!(
            "{z:>5.2} {r:>5.2} | {:>9.6} {:>9.6} {:>9.6} | {:>9.6} {:>9.6} {:>9.6}",
            c.fe, c.se, c.ic, d.fe, d.se, d.ic
        );
    }
    println!("(* = purified evolution)");
    Ok(())
}
