//! An N-use map from bath overlaps and the fidelity of a GHZ-like input.
//!
//!     cargo run --example n_use_map -- 4

use dephaser::bath::{overlap_profile, ChannelTiming, SpectralModel};
use dephaser::channel::{kraus_canonical, DephasingMap};
use dephaser::infometrics::entanglement_fidelity;
use dephaser::qstate::PureState;

fn main() -> dephaser::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let model = SpectralModel::ohmic(0.5, 3.0, 0.2)?;
    let timing = ChannelTiming::new(1.0, 1.0, 0.4)?;
    let overlaps = overlap_profile(&model, &timing, n)?;
    println!(
        "I(m tau) = {:?}",
        overlaps
            .iter()
            .map(|x| format!("{x:.5}"))
            .collect::<Vec<_>>()
    );
    let map = DephasingMap::from_overlaps(timing.coupling, &overlaps)?;
    println!(
        "{n} uses, coefficient between |0..0> and |1..1>: {:.6}",
        map.coefficient(0, map.dim() - 1)
    );

    // (|01..> + |10..>)/sqrt2 alternating pattern versus |0..0> + |1..1>
    let dim = map.dim();
    let alt: usize = (0..n).fold(0, |acc, k| (acc << 1) | (k % 2));
    let mut a = vec![0.0; dim];
    a[alt] = 1.0;
    a[(dim - 1) ^ alt] = 1.0;
    let mut b = vec![0.0; dim];
    b[0] = 1.0;
    b[dim - 1] = 1.0;
    for (label, amps) in [("alternating", a), ("GHZ", b)] {
        let rho = PureState::from_real(&amps)?.projector();
        println!(
            "  {label:<12} fidelity {:.6}",
            entanglement_fidelity(&rho, &map)?
        );
    }
    if n <= 6 {
        println!(
            "canonical Kraus operators: {}",
            kraus_canonical(&map)?.len()
        );
    }
    Ok(())
}
