//! Bosonic bath spectra and the overlap integrals that set the dephasing
//! parameters.
//!
//! The central quantity is
//!
//! ```text
//! I(s) = (1/pi) ∫_0^∞ S(w) (1 - cos w tau_p) / w^2 · cos(w s) dw
//! ```
//!
//! from which `g = exp(-lambda^2 I(0))`, the memory coefficient
//! `gamma = I(tau) / I(0)` and `h± = exp(-2 lambda^2 (I(0) ± I(tau)))`.
//! Units have `hbar = k_B = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, sine_integral_complement, QuadratureOptions};

/// Power spectrum of the bath coupling operator.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralModel {
    /// `eta w exp(-w/omega_c)`, times `coth(w / 2T)` when `temperature > 0`.
    Ohmic {
        eta: f64,
        omega_c: f64,
        temperature: f64,
    },
    /// Flat spectrum `S(w) = level`. Quadrature runs up to `omega_max`
    /// (default `200 / tau_p`) and the remainder is added in closed form.
    White { level: f64, omega_max: Option<f64> },
    /// Piecewise-linear interpolation of samples; constant below the first
    /// sample, zero beyond the last.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl SpectralModel {
    pub fn ohmic(eta: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::Domain(format!(
                "ohmic coupling eta = {eta} must be >= 0"
            )));
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::Domain(format!(
                "cutoff omega_c = {omega_c} must be > 0"
            )));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::Domain(format!(
                "temperature {temperature} must be >= 0"
            )));
        }
        Ok(Self::Ohmic {
            eta,
            omega_c,
            temperature,
        })
    }

    pub fn white(level: f64) -> Result<Self> {
        if !(level >= 0.0 && level.is_finite()) {
            return Err(Error::Domain(format!("white level {level} must be >= 0")));
        }
        Ok(Self::White {
            level,
            omega_max: None,
        })
    }

    pub fn white_with_cutoff(level: f64, omega_max: f64) -> Result<Self> {
        let Self::White { level, .. } = Self::white(level)? else {
            unreachable!()
        };
        if !(omega_max > 0.0 && omega_max.is_finite()) {
            return Err(Error::Domain(format!("omega_max {omega_max} must be > 0")));
        }
        Ok(Self::White {
            level,
            omega_max: Some(omega_max),
        })
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain(
                "tabulated spectrum needs at least one sample".into(),
            ));
        }
        for &(w, s) in &samples {
            if !w.is_finite() || !s.is_finite() {
                return Err(Error::Domain("tabulated samples must be finite".into()));
            }
            if w < 0.0 || s < 0.0 {
                return Err(Error::Domain(format!(
                    "tabulated sample ({w}, {s}) must be non-negative"
                )));
            }
        }
        if samples
            .windows(2)
            .any(|p| p[1].0.partial_cmp(&p[0].0) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::Domain(
                "tabulated abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Self::Tabulated { samples })
    }

    /// `S(w)` for `w >= 0`.
    pub fn density(&self, omega: f64) -> Result<f64> {
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::Domain(format!("frequency {omega} must be >= 0")));
        }
        Ok(self.density_unchecked(omega))
    }

    fn density_unchecked(&self, omega: f64) -> f64 {
        match *self {
            Self::Ohmic {
                eta,
                omega_c,
                temperature,
            } => {
                let decay = (-omega / omega_c).exp();
                if temperature == 0.0 {
                    eta * omega * decay
                } else {
                    let x = omega / (2.0 * temperature);
                    // w coth(w/2T) -> 2T (1 + x^2/3) as w -> 0
                    let w_coth = if x < 1e-6 {
                        2.0 * temperature * (1.0 + x * x / 3.0)
                    } else {
                        omega / x.tanh()
                    };
                    eta * w_coth * decay
                }
            }
            Self::White { level, .. } => level,
            Self::Tabulated { ref samples } => interpolate(samples, omega),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Self::Ohmic { eta, .. } => *eta == 0.0,
            Self::White { level, .. } => *level == 0.0,
            Self::Tabulated { samples } => samples.iter().all(|s| s.1 == 0.0),
        }
    }
}

fn interpolate(samples: &[(f64, f64)], omega: f64) -> f64 {
    let (first_w, first_s) = samples[0];
    let (last_w, last_s) = samples[samples.len() - 1];
    if omega <= first_w {
        return first_s;
    }
    if omega > last_w {
        return 0.0;
    }
    if omega == last_w {
        return last_s;
    }
    let i = samples.partition_point(|s| s.0 <= omega);
    let (w0, s0) = samples[i - 1];
    let (w1, s1) = samples[i];
    s0 + (s1 - s0) * (omega - w0) / (w1 - w0)
}

/// Free-function form of [`SpectralModel::density`].
pub fn spectral_density(model: &SpectralModel, omega: f64) -> Result<f64> {
    model.density(omega)
}

/// Coupling and timing of the carriers crossing the channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelTiming {
    /// Coupling strength lambda (1/time).
    pub coupling: f64,
    /// Crossing time tau_p.
    pub crossing_time: f64,
    /// Separation tau between consecutive carriers.
    pub separation: f64,
}

impl ChannelTiming {
    pub fn new(coupling: f64, crossing_time: f64, separation: f64) -> Result<Self> {
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::Domain(format!("coupling {coupling} must be >= 0")));
        }
        if !(crossing_time > 0.0 && crossing_time.is_finite()) {
            return Err(Error::Domain(format!(
                "crossing time {crossing_time} must be > 0"
            )));
        }
        if !(separation >= 0.0 && separation.is_finite()) {
            return Err(Error::Domain(format!(
                "separation {separation} must be >= 0"
            )));
        }
        Ok(Self {
            coupling,
            crossing_time,
            separation,
        })
    }
}

/// `(1 - cos a w) / w^2`, stable through `w = 0`.
fn window_kernel(a: f64, omega: f64) -> f64 {
    let x = a * omega;
    if x.abs() < 1e-3 {
        let x2 = x * x;
        a * a * (0.5 - x2 / 24.0 + x2 * x2 / 720.0)
    } else {
        let s = (0.5 * x).sin();
        2.0 * s * s / (omega * omega)
    }
}

/// `∫_W^∞ (1 - cos c w)/w^2 dw`.
fn window_tail(c: f64, upper: f64) -> f64 {
    let c = c.abs();
    if c == 0.0 {
        return 0.0;
    }
    let s = (0.5 * c * upper).sin();
    2.0 * s * s / upper + c * sine_integral_complement(c * upper)
}

/// The overlap integral `I(shift)` at the default tolerance (relative 1e-10,
/// at most 10^6 integrand evaluations).
pub fn overlap_integral(model: &SpectralModel, crossing_time: f64, shift: f64) -> Result<f64> {
    overlap_integral_with(model, crossing_time, shift, &QuadratureOptions::default())
}

pub fn overlap_integral_with(
    model: &SpectralModel,
    crossing_time: f64,
    shift: f64,
    options: &QuadratureOptions,
) -> Result<f64> {
    if !(crossing_time > 0.0 && crossing_time.is_finite()) {
        return Err(Error::Domain(format!(
            "crossing time {crossing_time} must be > 0"
        )));
    }
    if !(shift >= 0.0 && shift.is_finite()) {
        return Err(Error::Domain(format!("shift {shift} must be >= 0")));
    }
    if model.is_zero() {
        return Ok(0.0);
    }
    let a = crossing_time;
    let upper = match model {
        SpectralModel::Ohmic { omega_c, .. } => 40.0 * omega_c,
        SpectralModel::White { omega_max, .. } => omega_max.unwrap_or(200.0 / a),
        SpectralModel::Tabulated { samples } => samples[samples.len() - 1].0,
    };

    let width = panel_width(upper, a + shift);
    let panels = (upper / width).ceil();
    if panels * 15.0 > options.max_evals as f64 {
        return Err(Error::Quadrature {
            evaluations: (panels * 15.0).min(usize::MAX as f64) as usize,
            error_estimate: f64::INFINITY,
            tolerance: options.rel_tol,
        });
    }
    let mut points = panel_breakpoints(upper, width);
    if let SpectralModel::Tabulated { samples } = model {
        points.extend(
            samples
                .iter()
                .map(|s| s.0)
                .filter(|&w| w > 0.0 && w < upper),
        );
        points.sort_by(f64::total_cmp);
        points.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * upper);
    }

    let integrand =
        |w: f64| model.density_unchecked(w) * window_kernel(a, w) * (w * shift).cos() / PI;
    let body = if points.len() >= 2 {
        integrate_panels(integrand, &points, options)?.value
    } else {
        0.0
    };

    let tail = match model {
        SpectralModel::White { level, .. } => {
            // (1 - cos a w) cos b w = -(1 - cos b w) + (1 - cos (a+b) w)/2 + (1 - cos (a-b) w)/2
            level / PI
                * (-window_tail(shift, upper)
                    + 0.5 * window_tail(a + shift, upper)
                    + 0.5 * window_tail(a - shift, upper))
        }
        _ => 0.0,
    };
    Ok(body + tail)
}

/// Panel width: at most a half period of the fastest oscillation.
fn panel_width(upper: f64, fastest: f64) -> f64 {
    (PI / fastest).min(upper / 16.0)
}

fn panel_breakpoints(upper: f64, width: f64) -> Vec<f64> {
    if upper.is_nan() || upper <= 0.0 {
        return vec![];
    }
    let n = (upper / width).ceil() as usize;
    let mut pts: Vec<f64> = (0..n).map(|i| i as f64 * width).collect();
    pts.push(upper);
    pts
}

/// Provenance of a [`DephasingParams`].
#[derive(Clone, Debug, PartialEq)]
pub enum ParamOrigin {
    /// Given directly as `(g, gamma)`.
    Direct,
    /// Computed from a bath spectrum.
    Bath {
        timing: ChannelTiming,
        /// `I(0)`.
        i0: f64,
        /// `I(tau)`.
        i_tau: f64,
    },
}

/// Scalar channel parameters for one and two uses.
#[derive(Clone, Debug, PartialEq)]
pub struct DephasingParams {
    /// Single-use dephasing factor.
    pub g: f64,
    /// `I(tau) / I(0)`; `None` when the spectrum vanishes.
    pub gamma_mem: Option<f64>,
    /// Coherence factor between `|00>` and `|11>`.
    pub h_plus: f64,
    /// Coherence factor between `|01>` and `|10>`.
    pub h_minus: f64,
    pub origin: ParamOrigin,
}

impl DephasingParams {
    /// Parameters from `g` and the memory coefficient, `h± = g^(2(1±gamma))`.
    pub fn from_factors(g: f64, gamma_mem: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::Domain(format!("g = {g} must lie in [0, 1]")));
        }
        if !(0.0..=1.0).contains(&gamma_mem) {
            return Err(Error::Domain(format!(
                "gamma_mem = {gamma_mem} must lie in [0, 1]"
            )));
        }
        Ok(Self {
            g,
            gamma_mem: Some(gamma_mem),
            h_plus: g.powf(2.0 * (1.0 + gamma_mem)),
            h_minus: g.powf(2.0 * (1.0 - gamma_mem)),
            origin: ParamOrigin::Direct,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            g: 1.0,
            gamma_mem: Some(0.0),
            h_plus: 1.0,
            h_minus: 1.0,
            origin: ParamOrigin::Direct,
        }
    }

    /// Memory coefficient, reading an undefined one (vanishing spectrum) as 0.
    pub fn gamma(&self) -> f64 {
        self.gamma_mem.unwrap_or(0.0)
    }

    pub fn i0(&self) -> Option<f64> {
        match self.origin {
            ParamOrigin::Bath { i0, .. } => Some(i0),
            ParamOrigin::Direct => None,
        }
    }

    pub fn i_tau(&self) -> Option<f64> {
        match self.origin {
            ParamOrigin::Bath { i_tau, .. } => Some(i_tau),
            ParamOrigin::Direct => None,
        }
    }
}

/// Evaluates `I(0)` and `I(tau)` and derives `g`, `gamma` and `h±`.
pub fn dephasing_params(model: &SpectralModel, timing: &ChannelTiming) -> Result<DephasingParams> {
    let i0 = overlap_integral(model, timing.crossing_time, 0.0)?;
    let i_tau = overlap_integral(model, timing.crossing_time, timing.separation)?;
    let l2 = timing.coupling * timing.coupling;
    let origin = ParamOrigin::Bath {
        timing: *timing,
        i0,
        i_tau,
    };
    if i0 <= 0.0 {
        return Ok(DephasingParams {
            g: 1.0,
            gamma_mem: None,
            h_plus: 1.0,
            h_minus: 1.0,
            origin,
        });
    }
    Ok(DephasingParams {
        g: (-l2 * i0).exp(),
        gamma_mem: Some(i_tau / i0),
        h_plus: (-2.0 * l2 * (i0 + i_tau)).exp(),
        h_minus: (-2.0 * l2 * (i0 - i_tau)).exp(),
        origin,
    })
}

/// `I(m tau)` for `m = 0 .. n_uses - 1`, the input to an `n_uses`-use map.
pub fn overlap_profile(
    model: &SpectralModel,
    timing: &ChannelTiming,
    n_uses: usize,
) -> Result<Vec<f64>> {
    (0..n_uses)
        .map(|m| overlap_integral(model, timing.crossing_time, m as f64 * timing.separation))
        .collect()
}
