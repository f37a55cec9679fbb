//! Globally adaptive Gauss-Kronrod (G7/K15) quadrature over a list of panels,
//! plus the sine-integral complement used for analytic tails.

#![allow(clippy::excessive_precision)]
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1] (positive half, descending) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    /// Target error relative to the integral of |f|.
    pub rel_tol: f64,
    /// Hard cap on integrand evaluations.
    pub max_evals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_evals: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Estimate of the integral of |f|, the scale the tolerance is relative to.
    pub abs_integral: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += w * (f1 + f2);
        abs += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs: abs * half.abs(),
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// Each consecutive pair of breakpoints is an initial panel; the panel with
/// the largest error estimate is bisected until the summed estimate drops
/// below `rel_tol * integral(|f|)` or the evaluation cap is hit.
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    options: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if breakpoints.len() < 2 {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            abs_integral: 0.0,
            evaluations: 0,
        });
    }
    if breakpoints
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
    {
        return Err(Error::Domain(
            "quadrature breakpoints must be strictly increasing".into(),
        ));
    }
    let panels = breakpoints.len() - 1;
    if panels.saturating_mul(15) > options.max_evals {
        return Err(Error::Quadrature {
            evaluations: panels.saturating_mul(15),
            error_estimate: f64::INFINITY,
            tolerance: options.rel_tol,
        });
    }

    let mut heap = BinaryHeap::with_capacity(panels);
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        heap.push(kronrod15(&f, w[0], w[1]));
        evaluations += 15;
    }

    let totals = |heap: &BinaryHeap<Segment>| {
        heap.iter().fold((0.0, 0.0, 0.0), |acc, s| {
            (acc.0 + s.value, acc.1 + s.error, acc.2 + s.abs)
        })
    };
    let (mut value, mut error, mut abs) = totals(&heap);
    loop {
        let tolerance = options.rel_tol * abs;
        if error <= tolerance || abs == 0.0 {
            // Running sums drift; confirm with a fresh summation.
            (value, error, abs) = totals(&heap);
            if error <= options.rel_tol * abs || abs == 0.0 {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: error,
                    abs_integral: abs,
                    evaluations,
                });
            }
            continue;
        }
        if !value.is_finite() || evaluations + 30 > options.max_evals {
            return Err(Error::Quadrature {
                evaluations,
                error_estimate: error,
                tolerance,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
    }
}

/// `pi/2 - Si(x)` for `x >= 0`, where `Si` is the sine integral.
pub fn sine_integral_complement(x: f64) -> f64 {
    if x <= 2.0 {
        // Power series for Si.
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0usize;
        loop {
            let n = (2 * k + 1) as f64;
            term *= -x2 / ((n + 1.0) * (n + 2.0));
            let contrib = term / (n + 2.0);
            sum += contrib;
            k += 1;
            if contrib.abs() < 1e-17 * sum.abs().max(1e-300) || k > 60 {
                break;
            }
        }
        FRAC_PI_2 - sum
    } else {
        // Continued fraction for E1(ix) (modified Lentz); pi/2 - Si(x) = -Im E1(ix).
        use num_complex::Complex64;
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 2..10_000 {
            let a = -((i - 1) as f64).powi(2);
            b += 2.0;
            d = Complex64::new(1.0, 0.0) / (d * a + b);
            c = b + Complex64::new(a, 0.0) / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).norm() < 1e-16 {
                break;
            }
        }
        let e1 = Complex64::new(x.cos(), -x.sin()) * h;
        -e1.im
    }
}
