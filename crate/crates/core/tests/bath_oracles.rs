use std::f64::consts::PI;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use dephaser::bath::{
    dephasing_params, overlap_integral, overlap_profile, ChannelTiming, SpectralModel,
};
use dephaser::DephasingParams;

/// Composite Simpson rule on a uniform grid, kept separate from the library quadrature.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn ohmic_zero_temperature(eta: f64, wc: f64, a: f64, b: f64) -> f64 {
    let l = |x: f64| (1.0 + x * x * wc * wc).ln();
    eta / PI * (-0.5 * l(b) + 0.25 * l(a + b) + 0.25 * l(a - b))
}

#[test]
fn white_spectrum_triangle() {
    for level in [0.3, 1.0, 2.5] {
        for tau_p in [0.5f64, 1.0, 2.0] {
            let white = SpectralModel::white(level).unwrap();
            for frac in [0.0, 0.25, 0.5, 1.0, 2.0] {
                let b = frac * tau_p;
                let expected = level * (tau_p - b).max(0.0) / 2.0;
                let got = overlap_integral(&white, tau_p, b).unwrap();
                assert_abs_diff_eq!(got, expected, epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn ohmic_zero_temperature_log_form() {
    for wc in [1.0, 3.0, 10.0] {
        let ohmic = SpectralModel::ohmic(1.0, wc, 0.0).unwrap();
        for tau_p in [0.5f64, 1.0, 2.0] {
            for b in [0.0, 0.3, 1.0, 2.5, 7.0] {
                let got = overlap_integral(&ohmic, tau_p, b).unwrap();
                assert_abs_diff_eq!(
                    got,
                    ohmic_zero_temperature(1.0, wc, tau_p, b),
                    epsilon = 1e-8
                );
            }
        }
    }
    let ohmic = SpectralModel::ohmic(1.0, 3.0, 0.0).unwrap();
    let i0 = overlap_integral(&ohmic, 1.0, 0.0).unwrap();
    assert_abs_diff_eq!(i0, (1.0 + 9.0f64).ln() / (2.0 * PI), epsilon = 1e-8);
}

#[test]
fn thermal_ohmic_against_simpson() {
    let (eta, wc, t, tau_p, shift) = (0.7, 4.0, 1.5, 1.2, 0.8);
    let model = SpectralModel::ohmic(eta, wc, t).unwrap();
    let integrand = |w: f64| {
        if w == 0.0 {
            // limit: eta * 2T * tau_p^2 / 2
            return eta * 2.0 * t * tau_p * tau_p / 2.0 / PI;
        }
        let s = eta * w * (-w / wc).exp() / (w / (2.0 * t)).tanh();
        s * (1.0 - (w * tau_p).cos()) / (w * w) * (w * shift).cos() / PI
    };
    let expected = simpson(integrand, 0.0, 40.0 * wc, 400_000);
    assert_relative_eq!(
        overlap_integral(&model, tau_p, shift).unwrap(),
        expected,
        max_relative = 1e-8
    );
}

#[test]
fn tabulated_against_simpson() {
    let samples: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let w = 0.25 * i as f64;
            (w, (1.0 + w) * (-0.4 * w).exp())
        })
        .collect();
    let model = SpectralModel::tabulated(samples.clone()).unwrap();
    let interp = |w: f64| {
        let k = ((w / 0.25) as usize).min(39);
        let (w0, s0) = samples[k];
        let (w1, s1) = samples[k + 1];
        s0 + (s1 - s0) * (w - w0) / (w1 - w0)
    };
    let (tau_p, shift) = (1.0, 0.6);
    // integrate panel by panel so the kinks sit on panel edges
    let mut expected = 0.0;
    for k in 0..40 {
        let (a, b) = (0.25 * k as f64, 0.25 * (k + 1) as f64);
        expected += simpson(
            |w: f64| {
                let kernel = if w == 0.0 {
                    tau_p * tau_p / 2.0
                } else {
                    (1.0 - (w * tau_p).cos()) / (w * w)
                };
                interp(w) * kernel * (w * shift).cos() / PI
            },
            a,
            b,
            2000,
        );
    }
    assert_relative_eq!(
        overlap_integral(&model, tau_p, shift).unwrap(),
        expected,
        max_relative = 1e-9
    );
}

fn bath_grid() -> Vec<(SpectralModel, ChannelTiming)> {
    let models = [
        SpectralModel::white(0.8).unwrap(),
        SpectralModel::ohmic(1.0, 3.0, 0.0).unwrap(),
        SpectralModel::ohmic(0.5, 2.0, 0.7).unwrap(),
    ];
    let mut out = Vec::new();
    for m in &models {
        for lambda in [0.5, 1.0] {
            for tau in [0.0, 0.25, 0.6, 1.5] {
                out.push((m.clone(), ChannelTiming::new(lambda, 1.0, tau).unwrap()));
            }
        }
    }
    out
}

#[test]
fn two_use_factors_multiply_to_g_to_the_fourth() {
    for (model, timing) in bath_grid() {
        let p = dephasing_params(&model, &timing).unwrap();
        assert_abs_diff_eq!(p.h_plus * p.h_minus, p.g.powi(4), epsilon = 1e-9);
    }
}

#[test]
fn bath_and_factor_routes_agree() {
    for (model, timing) in bath_grid() {
        let p = dephasing_params(&model, &timing).unwrap();
        let gamma = p.gamma_mem.unwrap();
        if !(0.0..=1.0).contains(&gamma) {
            continue;
        }
        let q = DephasingParams::from_factors(p.g, gamma).unwrap();
        assert_abs_diff_eq!(p.h_plus, q.h_plus, epsilon = 1e-9);
        assert_abs_diff_eq!(p.h_minus, q.h_minus, epsilon = 1e-9);
    }
}

#[test]
fn memory_fades_with_separation() {
    let white = SpectralModel::white(1.0).unwrap();
    let mut previous = f64::INFINITY;
    for tau in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let p = dephasing_params(&white, &ChannelTiming::new(1.0, 1.0, tau).unwrap()).unwrap();
        assert!(p.gamma() < previous);
        assert_abs_diff_eq!(p.gamma(), 1.0 - tau, epsilon = 1e-8);
        previous = p.gamma();
    }
    let ohmic = SpectralModel::ohmic(1.0, 3.0, 0.0).unwrap();
    let far = dephasing_params(&ohmic, &ChannelTiming::new(1.0, 1.0, 200.0).unwrap()).unwrap();
    assert!(far.gamma().abs() < 1e-4, "gamma = {}", far.gamma());
}

#[test]
fn stronger_coupling_dephases_more() {
    let ohmic = SpectralModel::ohmic(1.0, 3.0, 0.3).unwrap();
    let mut previous = 1.0;
    for lambda in [0.2, 0.5, 1.0, 2.0] {
        let p = dephasing_params(&ohmic, &ChannelTiming::new(lambda, 1.0, 0.5).unwrap()).unwrap();
        assert!(p.g < previous);
        previous = p.g;
    }
}

#[test]
fn ohmic_overlap_can_be_negative() {
    // I(tau) < 0 once the window is longer than the bath correlation time
    let ohmic = SpectralModel::ohmic(1.0, 3.0, 0.0).unwrap();
    let i_tau = overlap_integral(&ohmic, 1.0, 1.0).unwrap();
    assert!(i_tau < 0.0);
    assert_abs_diff_eq!(
        i_tau,
        ohmic_zero_temperature(1.0, 3.0, 1.0, 1.0),
        epsilon = 1e-8
    );
}

#[test]
fn profile_lists_successive_shifts() {
    let white = SpectralModel::white(1.0).unwrap();
    let timing = ChannelTiming::new(1.0, 1.0, 0.25).unwrap();
    let profile = overlap_profile(&white, &timing, 5).unwrap();
    for (m, i) in profile.iter().enumerate() {
        assert_abs_diff_eq!(*i, (1.0 - 0.25 * m as f64).max(0.0) / 2.0, epsilon = 1e-8);
    }
}
