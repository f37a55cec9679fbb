//! Qubit registers: density operators, pure states, partial traces,
//! entropies, fidelity and purification.
//!
//! Qubit 0 is the most significant bit of a basis index, so `|q0 q1 ... >`
//! has index `sum_k q_k 2^(n-1-k)` and tensor products concatenate registers
//! left to right.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, HermitianEigen};

pub const HERMITIAN_SLACK: f64 = 1e-12;
pub const TRACE_SLACK: f64 = 1e-12;
/// Eigenvalues in `[-PSD_SLACK, 0)` are treated as zero.
pub const PSD_SLACK: f64 = 1e-10;
pub const NORM_SLACK: f64 = 1e-12;

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Domain(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Unit-trace, Hermitian, positive semidefinite operator on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let qubits = qubits_for_dim(matrix.dim())?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_SLACK {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_SLACK {
            return Err(Error::BadTrace { trace });
        }
        let eig = hermitian_eigen(&matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -PSD_SLACK {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(Self { qubits, matrix })
    }

    /// Wraps a matrix produced by a map already known to preserve validity.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let qubits = matrix.dim().trailing_zeros() as usize;
        Self { qubits, matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        Self::from_matrix_unchecked(ComplexMatrix::outer(amps, amps))
    }

    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(populations))
    }

    /// Single-qubit state `(1 + x X + y Y + z Z)/2`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if x * x + y * y + z * z > 1.0 + NORM_SLACK {
            return Err(Error::Domain(format!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            )));
        }
        let m = ComplexMatrix::from_row_major(vec![
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ])?;
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Random mixed state `G G^dagger / tr(G G^dagger)` with Gaussian-like `G`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let g = ComplexMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        let m = m.scale(1.0 / tr);
        // enforce exact Hermiticity
        let m = ComplexMatrix::from_fn(dim, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
        Self::from_matrix_unchecked(m)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(&self.matrix)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_matrix_unchecked(self.matrix.kron(&other.matrix))
    }

    /// Conjugation `U rho U^dagger` by a unitary.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: unitary.dim(),
            });
        }
        Ok(Self::from_matrix_unchecked(
            &(unitary * &self.matrix) * &unitary.adjoint(),
        ))
    }

    /// Reduced state on the qubits listed in `keep` (in ascending order of index).
    ///
    /// An empty `keep` returns the 1x1 matrix holding the trace.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.qubits;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.len() != keep.len() {
            return Err(Error::Domain("duplicate qubit index in keep set".into()));
        }
        if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= n) {
            return Err(Error::Domain(format!(
                "qubit index {bad} out of range for a {n}-qubit state"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
        let kept_dim = 1usize << keep_sorted.len();
        let traced_dim = 1usize << traced.len();

        let compose = |kept_bits: usize, traced_bits: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in keep_sorted.iter().enumerate() {
                let bit = (kept_bits >> (keep_sorted.len() - 1 - pos)) & 1;
                idx |= bit << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (traced_bits >> (traced.len() - 1 - pos)) & 1;
                idx |= bit << (n - 1 - q);
            }
            idx
        };

        let out = ComplexMatrix::from_fn(kept_dim, |a, b| {
            (0..traced_dim)
                .map(|t| self.matrix[(compose(a, t), compose(b, t))])
                .sum()
        });
        Ok(Self::from_matrix_unchecked(out))
    }

    /// Largest entrywise deviation from another state of the same dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// Normalized state vector on `qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_SLACK {
            return Err(Error::Domain(format!("state norm {norm} is not 1")));
        }
        Ok(Self { qubits, amplitudes })
    }

    /// Normalizes real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("zero vector has no direction".into()));
        }
        Self::new(
            amplitudes
                .iter()
                .map(|&a| Complex64::new(a / norm, 0.0))
                .collect(),
        )
    }

    /// Computational basis state `|index>` on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            qubits,
            amplitudes: amps,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self {
            qubits: self.qubits + other.qubits,
            amplitudes,
        }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::Domain(format!("probability {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(xlog2x_neg(x) + xlog2x_neg(1.0 - x))
}

/// `-x log2 x` with the `0 log 0 = 0` convention.
pub(crate) fn xlog2x_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a spectrum, clamping tiny negative values.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -PSD_SLACK {
            return Err(Error::NotPositive { eigenvalue: l });
        }
        s += xlog2x_neg(l);
    }
    Ok(s)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&rho.eigen()?.values)
}

/// `<psi| rho |psi>`.
pub fn state_fidelity(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.amplitudes.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi.amplitudes.len(),
        });
    }
    let rho_psi = rho.matrix().mul_vec(&psi.amplitudes);
    let f: Complex64 = psi
        .amplitudes
        .iter()
        .zip(&rho_psi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(f.re)
}

/// Purification `sum_k sqrt(l_k) |k>_R |v_k>_Q` of `rho`.
///
/// The reference register comes first and has as many qubits as the system;
/// reference basis vectors follow the eigenvalue order of [`hermitian_eigen`]
/// (descending, ties broken lexicographically).
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = rho.eigen()?;
    let dim = rho.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda < -PSD_SLACK {
            return Err(Error::NotPositive { eigenvalue: lambda });
        }
        let w = lambda.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for i in 0..dim {
            amps[k * dim + i] = eig.vectors[(i, k)] * w;
        }
    }
    // Renormalize away clamped negative slack.
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    Ok(PureState {
        qubits: 2 * rho.qubits(),
        amplitudes: amps,
    })
}
