//! Entanglement fidelity, entropy exchange and coherent information.
//!
//! Two routes are provided. The pipeline route purifies the input, sends the
//! system half through the map and evaluates the joint output directly. The
//! closed-form route evaluates formulas for single-use Bloch inputs and for
//! the two-use family `rho_pq`. Tests hold the two against each other.

use num_complex::Complex64;

use crate::bath::DephasingParams;
use crate::channel::{apply_to_system_half, DephasingMap, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::qstate::{
    binary_entropy, purify, spectrum_entropy, state_fidelity, von_neumann_entropy, xlog2x_neg,
    DensityMatrix, PureState,
};

/// Single-qubit input by its longitudinal Bloch component `z` and transverse
/// magnitude `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochInput {
    z: f64,
    r: f64,
}

impl BlochInput {
    pub fn new(z: f64, r: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&r) || z * z + r * r > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "Bloch input (z = {z}, r = {r}) lies outside the unit ball"
            )));
        }
        Ok(Self { z, r })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The state with Bloch vector `(r, 0, z)`.
    pub fn state(&self) -> DensityMatrix {
        DensityMatrix::from_bloch(self.r, 0.0, self.z).expect("validated Bloch input")
    }
}

/// Weight `p` of the `{|01>, |10>}` block in `rho_pq`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqInput {
    p: f64,
}

impl PqInput {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("p = {p} must lie in [0, 1]")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `rho_pq = diag(q, p, p, q) / 2`.
    pub fn state(&self) -> DensityMatrix {
        let (p, q) = (self.p, self.q());
        DensityMatrix::diagonal(&[0.5 * q, 0.5 * p, 0.5 * p, 0.5 * q]).expect("valid populations")
    }

    /// `sum_j sqrt(rho_jj) |j>_R |j>_Q`, reference first.
    pub fn purification(&self) -> PureState {
        let pops = [0.5 * self.q(), 0.5 * self.p, 0.5 * self.p, 0.5 * self.q()];
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        for (j, w) in pops.iter().enumerate() {
            amps[j * 4 + j] = Complex64::new(w.sqrt(), 0.0);
        }
        PureState::new(amps).expect("normalized purification")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    /// Entanglement fidelity.
    pub fe: f64,
    /// Entropy exchange, bits.
    pub se: f64,
    /// Coherent information, bits.
    pub ic: f64,
    /// Input entropy, bits.
    pub s_in: f64,
}

fn check_dims(rho: &DensityMatrix, map: &DephasingMap) -> Result<()> {
    if rho.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Overlap of a purification of `rho` with its image under `I ⊗ map`.
pub fn entanglement_fidelity(rho: &DensityMatrix, map: &DephasingMap) -> Result<f64> {
    check_dims(rho, map)?;
    let psi = purify(rho)?;
    let out = apply_to_system_half(&psi, map)?;
    state_fidelity(&psi, &out)
}

/// Entropy of the reference-system output of a purification of `rho`.
pub fn entropy_exchange(rho: &DensityMatrix, map: &DephasingMap) -> Result<f64> {
    check_dims(rho, map)?;
    let psi = purify(rho)?;
    von_neumann_entropy(&apply_to_system_half(&psi, map)?)
}

/// `S(map(rho)) - S_e(rho, map)`.
pub fn coherent_information(rho: &DensityMatrix, map: &DephasingMap) -> Result<f64> {
    check_dims(rho, map)?;
    Ok(von_neumann_entropy(&map.apply(rho)?)? - entropy_exchange(rho, map)?)
}

/// All metrics for `rho` from a single purification.
pub fn pipeline_metrics(rho: &DensityMatrix, map: &DephasingMap) -> Result<MetricsReport> {
    check_dims(rho, map)?;
    metrics_with_purification(&purify(rho)?, map)
}

/// All metrics from an explicit purification, reference qubits first.
///
/// The input state is recovered by tracing out the reference, so any
/// purification of the same state gives the same report.
pub fn metrics_with_purification(psi: &PureState, map: &DephasingMap) -> Result<MetricsReport> {
    let n = map.n_uses();
    if psi.qubits() < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi.qubits(),
        });
    }
    let total = psi.qubits();
    let system: Vec<usize> = (total - n..total).collect();
    let rho = psi.projector().partial_trace(&system)?;
    let joint = apply_to_system_half(psi, map)?;
    let fe = state_fidelity(psi, &joint)?;
    let se = von_neumann_entropy(&joint)?;
    let s_out = von_neumann_entropy(&map.apply(&rho)?)?;
    let s_in = von_neumann_entropy(&rho)?;
    Ok(MetricsReport {
        fe,
        se,
        ic: s_out - se,
        s_in,
    })
}

/// `sum_m w_m |Tr(rho K_m)|^2`.
pub fn kraus_fidelity(set: &KrausSet, rho: &DensityMatrix) -> Result<f64> {
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    Ok(set
        .terms()
        .iter()
        .map(|(w, k)| w * (rho.matrix() * k).trace().norm_sqr())
        .sum())
}

/// Entropy of `W_mn = sqrt(w_m w_n) Tr(K_m rho K_n^dagger)`.
pub fn kraus_entropy_exchange(set: &KrausSet, rho: &DensityMatrix) -> Result<f64> {
    if !set.is_valid() {
        return Err(Error::InvalidKrausSet);
    }
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: rho.dim(),
        });
    }
    let terms = set.terms();
    let w = ComplexMatrix::from_fn(terms.len(), |m, n| {
        let (wm, km) = &terms[m];
        let (wn, kn) = &terms[n];
        (&(km * rho.matrix()) * &kn.adjoint()).trace() * (wm * wn).sqrt()
    });
    spectrum_entropy(&hermitian_eigenvalues(&w)?)
}

/// Closed forms for one use on a Bloch input.
pub fn single_use_closed_forms(g: f64, input: BlochInput) -> Result<MetricsReport> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::Domain(format!("g = {g} must lie in [0, 1]")));
    }
    let (z, r) = (input.z, input.r);
    let fe = 0.5 * (1.0 + g) + 0.5 * (1.0 - g) * z * z;
    let se = binary_entropy(0.5 * (1.0 + (g * g + (1.0 - g * g) * z * z).sqrt()))?;
    let s_out = binary_entropy(0.5 * (1.0 + (z * z + g * g * r * r).sqrt()))?;
    let s_in = binary_entropy(0.5 * (1.0 + (z * z + r * r).min(1.0).sqrt()))?;
    Ok(MetricsReport {
        fe,
        se,
        ic: s_out - se,
        s_in,
    })
}

/// Spectrum of the reference-system output for `rho_pq` under the two-use map.
pub fn two_use_exchange_spectrum(input: PqInput, params: &DephasingParams) -> [f64; 4] {
    let (p, q, g) = (input.p, input.q(), params.g);
    let (hp, hm) = (params.h_plus, params.h_minus);
    let l1 = 0.5 * q * (1.0 - hp);
    let l2 = 0.5 * p * (1.0 - hm);
    let center = 0.25 * (1.0 + q * hp + p * hm);
    let split = q * (1.0 + hp) - p * (1.0 + hm);
    let radius = (split * split / 16.0 + g * g * p * q).sqrt();
    [l1, l2, center + radius, center - radius]
}

/// Closed forms for the two-use family `rho_pq`.
pub fn two_use_family_metrics(input: PqInput, params: &DephasingParams) -> MetricsReport {
    let (p, q, g) = (input.p, input.q(), params.g);
    let (hp, hm) = (params.h_plus, params.h_minus);
    let fe = 0.5 * (q * q * (1.0 + hp) + p * p * (1.0 + hm) + 4.0 * g * p * q);
    let se: f64 = two_use_exchange_spectrum(input, params)
        .iter()
        .map(|&l| xlog2x_neg(l.max(0.0)))
        .sum();
    let s_in = two_use_input_entropy(input);
    MetricsReport {
        fe,
        se,
        ic: s_in - se,
        s_in,
    }
}

/// `-p log2(p/2) - q log2(q/2)`.
pub fn two_use_input_entropy(input: PqInput) -> f64 {
    2.0 * (xlog2x_neg(0.5 * input.p) + xlog2x_neg(0.5 * input.q()))
}

/// The input weight that maximizes coherent information within `rho_pq`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalInput {
    pub p_opt: f64,
    pub ic_max: f64,
    pub fe: f64,
    pub se: f64,
    pub s_in: f64,
}

const GRID_POINTS: usize = 1001;
const REFINE_TOL: f64 = 1e-8;

/// Maximizes the coherent information of `rho_pq` over `p`: a 1001-point
/// grid, then golden-section search within one grid cell of the best point.
pub fn optimize_p(params: &DephasingParams) -> OptimalInput {
    let ic = |p: f64| two_use_family_metrics(PqInput { p }, params).ic;
    let step = 1.0 / (GRID_POINTS - 1) as f64;
    let (mut best_p, mut best) = (0.0, ic(0.0));
    for i in 1..GRID_POINTS {
        let p = i as f64 * step;
        let v = ic(p);
        if v > best {
            best = v;
            best_p = p;
        }
    }

    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = ((best_p - step).max(0.0), (best_p + step).min(1.0));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (ic(c), ic(d));
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ic(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ic(d);
        }
    }
    let refined = 0.5 * (a + b);
    let p_opt = if ic(refined) >= best { refined } else { best_p };
    let m = two_use_family_metrics(PqInput { p: p_opt }, params);
    OptimalInput {
        p_opt,
        ic_max: m.ic,
        fe: m.fe,
        se: m.se,
        s_in: m.s_in,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h(x: f64) -> f64 {
        binary_entropy(x).unwrap()
    }

    #[test]
    fn bloch_input_validation() {
        assert!(BlochInput::new(0.8, 0.6).is_ok());
        assert!(BlochInput::new(0.8, 0.7).is_err());
        assert!(BlochInput::new(1.2, 0.0).is_err());
        assert!(BlochInput::new(0.0, -0.1).is_err());
        assert!(PqInput::new(1.1).is_err());
    }

    #[test]
    fn single_use_bell_input() {
        let g = 0.5;
        let map = DephasingMap::single_use(g).unwrap();
        let rho = DensityMatrix::maximally_mixed(1);
        assert_abs_diff_eq!(
            entanglement_fidelity(&rho, &map).unwrap(),
            0.75,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            entropy_exchange(&rho, &map).unwrap(),
            h(0.75),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            coherent_information(&rho, &map).unwrap(),
            1.0 - h(0.75),
            epsilon = 1e-12
        );
    }

    #[test]
    fn single_use_closed_form_example() {
        let m = single_use_closed_forms(0.5, BlochInput::new(0.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(m.fe, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(m.se, 0.811278, epsilon = 1e-6);
        assert_abs_diff_eq!(m.ic, 0.188722, epsilon = 1e-6);
        let pole = single_use_closed_forms(0.3, BlochInput::new(1.0, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(pole.fe, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pole.se, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pole.ic, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn noiseless_metrics() {
        let map = DephasingMap::identity(2).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let m = pipeline_metrics(&rho, &map).unwrap();
        assert_abs_diff_eq!(m.fe, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.se, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.ic, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn dimension_mismatch() {
        let map = DephasingMap::single_use(0.5).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            entanglement_fidelity(&rho, &map),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(entropy_exchange(&rho, &map).is_err());
        assert!(coherent_information(&rho, &map).is_err());
    }

    #[test]
    fn two_use_spot_value() {
        let params = DephasingParams::from_factors(0.5, 1.0).unwrap();
        let input = PqInput::new(0.9).unwrap();
        let m = two_use_family_metrics(input, &params);
        assert_abs_diff_eq!(m.fe, 0.9053125, epsilon = 1e-12);
        assert_abs_diff_eq!(m.se, 0.4519, epsilon = 1e-4);
        assert_abs_diff_eq!(m.ic, 1.0171, epsilon = 1e-4);
        let spectrum = two_use_exchange_spectrum(input, &params);
        assert_abs_diff_eq!(spectrum.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectrum[0], 0.046875, epsilon = 1e-15);
        assert_abs_diff_eq!(spectrum[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn two_use_decoherence_free_input() {
        let params = DephasingParams::from_factors(0.3, 1.0).unwrap();
        let m = two_use_family_metrics(PqInput::new(1.0).unwrap(), &params);
        assert_abs_diff_eq!(m.fe, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.se, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.ic, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_use_memoryless_is_two_single_uses() {
        let g = 0.4;
        let params = DephasingParams::from_factors(g, 0.0).unwrap();
        let m = two_use_family_metrics(PqInput::new(0.5).unwrap(), &params);
        let b = 0.5 * (1.0 + g);
        assert_abs_diff_eq!(m.fe, b * b, epsilon = 1e-14);
        assert_abs_diff_eq!(m.se, 2.0 * h(b), epsilon = 1e-12);
        assert_abs_diff_eq!(m.ic, 2.0 * (1.0 - h(b)), epsilon = 1e-12);
    }

    #[test]
    fn kraus_routes_match_pipeline() {
        let g = 0.35;
        let rho = BlochInput::new(0.4, 0.5).unwrap().state();
        let map = DephasingMap::single_use(g).unwrap();
        let set = crate::channel::kraus_single(g).unwrap();
        assert_abs_diff_eq!(
            kraus_fidelity(&set, &rho).unwrap(),
            entanglement_fidelity(&rho, &map).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            kraus_entropy_exchange(&set, &rho).unwrap(),
            entropy_exchange(&rho, &map).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn optimizer_memoryless_symmetric() {
        let g = 0.6;
        let opt = optimize_p(&DephasingParams::from_factors(g, 0.0).unwrap());
        assert_abs_diff_eq!(opt.p_opt, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(opt.ic_max, 2.0 * (1.0 - h(0.5 * (1.0 + g))), epsilon = 1e-9);
    }

    #[test]
    fn optimizer_extremes() {
        let noiseless = optimize_p(&DephasingParams::from_factors(1.0, 1.0).unwrap());
        assert_abs_diff_eq!(noiseless.p_opt, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(noiseless.ic_max, 2.0, epsilon = 1e-12);
        let strong = optimize_p(&DephasingParams::from_factors(1e-3, 1.0).unwrap());
        assert!(strong.p_opt > 0.99);
        assert_abs_diff_eq!(strong.ic_max, 1.0, epsilon = 1e-2);
    }
}
