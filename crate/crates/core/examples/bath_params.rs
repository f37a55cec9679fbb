//! Dephasing parameters from three bath spectra, as the window separation grows.
//!
//!     cargo run --example bath_params

use dephaser::bath::{dephasing_params, ChannelTiming, SpectralModel};

fn main() -> dephaser::Result<()> {
    let models = [
        ("white", SpectralModel::white(1.0)?),
        ("ohmic T=0", SpectralModel::ohmic(1.0, 3.0, 0.0)?),
        ("ohmic T=1", SpectralModel::ohmic(1.0, 3.0, 1.0)?),
    ];
    println!(
        "{:<10} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "model", "tau", "g", "gamma", "h+", "h-"
    );
    for (name, model) in &models {
        for tau in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let p = dephasing_params(model, &ChannelTiming::new(1.0, 1.0, tau)?)?;
            println!(
                "{name:<10} {tau:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                p.g,
                p.gamma(),
                p.h_plus,
                p.h_minus
            );
        }
    }
    Ok(())
}
