//! CNOT encoding with one ancilla against sending a Bell half directly.
//!
//!     cargo run --example coding_protocol -- 0.3

use dephaser::protocol::{protocol_advantage, run_protocol, BellLabel};
use dephaser::DephasingParams;

fn main() -> dephaser::Result<()> {
    let g: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.3);
    println!("g = {g}");
    println!(
        "{:>6} {:>9} {:>9} {:>6}",
        "gamma", "coded", "uncoded", "gain"
    );
    for i in 0..=10 {
        let gamma = i as f64 / 10.0;
        let adv = protocol_advantage(&DephasingParams::from_factors(g, gamma)?)?;
        println!(
            "{gamma:>6.2} {:>9.6} {:>9.6} {:>6}",
            adv.coded,
            adv.uncoded,
            if adv.advantageous { "yes" } else { "no" }
        );
    }
    let r = run_protocol(BellLabel::PsiMinus, &DephasingParams::from_factors(g, 0.9)?)?;
    println!(
        "psi_minus at gamma = 0.9: fidelity {:.6}, ancilla <1|A|1> = {:.6}, factorizes: {}",
        r.fidelity,
        r.ancilla_out.matrix()[(1, 1)].re,
        r.disentangled
    );
    Ok(())
}
