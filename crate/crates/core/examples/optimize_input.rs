//! Best input weight p for each g, with and without memory.
//!
//!     cargo run --example optimize_input

use dephaser::{optimize_p, DephasingParams};

fn main() -> dephaser::Result<()> {
    println!(
        "{:>5} {:>9} {:>9} {:>12}",
        "g", "p_opt", "ic_max", "memoryless"
    );
    for i in 1..=9 {
        let g = i as f64 / 10.0;
        let with = optimize_p(&DephasingParams::from_factors(g, 1.0)?);
        let without = optimize_p(&DephasingParams::from_factors(g, 0.0)?);
        println!(
            "{g:>5.2} {:>9.6} {:>9.6} {:>12.6}",
            with.p_opt, with.ic_max, without.ic_max
        );
    }
    Ok(())
}
