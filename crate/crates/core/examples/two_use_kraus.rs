//! Kraus sets for two correlated uses: the six-operator set, its validity
//! region, and the canonical set from the coefficient matrix.
//!
//!     cargo run --example two_use_kraus -- 0.5 0.8

use dephaser::channel::{kraus_canonical, kraus_two_paper, kraus_two_printed};
use dephaser::{ComplexMatrix, DensityMatrix, DephasingMap, DephasingParams};

fn main() -> dephaser::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse::<f64>().ok());
    let g = args.next().unwrap_or(0.5);
    let gamma = args.next().unwrap_or(0.8);
    let params = DephasingParams::from_factors(g, gamma)?;
    let map = DephasingMap::from_params(&params, 2)?;
    println!(
        "g = {g}, gamma = {gamma}, h+ = {:.6}, h- = {:.6}",
        params.h_plus, params.h_minus
    );

    let six = kraus_two_paper(g, params.h_plus, params.h_minus)?;
    println!(
        "six-operator weights: {:?}",
        six.weights()
            .iter()
            .map(|w| format!("{w:.6}"))
            .collect::<Vec<_>>()
    );
    println!("all weights non-negative: {}", six.is_valid());

    let printed = kraus_two_printed(g, params.h_plus, params.h_minus)?;
    let id = ComplexMatrix::identity(4);
    println!(
        "trace loss with quarter weights on K4, K5: {:.6}",
        1.0 - printed.completeness()[(0, 0)].re
    );

    let canonical = kraus_canonical(&map)?;
    println!("canonical set: {} operators", canonical.len());
    for (w, k) in canonical.terms() {
        let diag: Vec<String> = (0..4).map(|i| format!("{:+.4}", k[(i, i)].re)).collect();
        println!("  w = {w:.6}  diag = [{}]", diag.join(", "));
    }
    println!(
        "completeness error: {:.2e}",
        canonical.completeness().max_abs_diff(&id)
    );

    let rho = DensityMatrix::random(&mut rand::thread_rng(), 2);
    let diff = canonical
        .apply(&rho, false)?
        .max_abs_diff(&map.apply(&rho)?);
    println!("canonical Kraus vs coefficient map on a random state: {diff:.2e}");
    Ok(())
}
