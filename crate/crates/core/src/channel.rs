//! The N-use dephasing map and its Kraus representations.
//!
//! A dephasing map keeps populations in the computational basis and scales
//! each coherence `rho_jl` by a real factor `c_jl`. The matrix `C = (c_jl)` is
//! the authoritative representation: the map is the Hadamard product with
//! `C`, and it is completely positive exactly when `C` is positive
//! semidefinite. Kraus sets are derived from `C`.

use num_complex::Complex64;

use crate::bath::DephasingParams;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::qstate::{DensityMatrix, PureState, PSD_SLACK};

pub const MAX_USES: usize = 10;
/// Eigenvalues of `C` at or below this are dropped from canonical Kraus sets.
pub const KRAUS_PRUNE: f64 = 1e-12;

/// Coefficient matrix of an `n_uses`-qubit dephasing map.
#[derive(Clone, Debug, PartialEq)]
pub struct DephasingMap {
    n_uses: usize,
    coefficients: Vec<f64>,
}

impl DephasingMap {
    /// Validates symmetry, unit diagonal, range `[0, 1]` (up to slack) and
    /// positive semidefiniteness of a row-major coefficient matrix.
    pub fn from_coefficients(n_uses: usize, coefficients: Vec<f64>) -> Result<Self> {
        check_uses(n_uses)?;
        let dim = 1usize << n_uses;
        if coefficients.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: coefficients.len(),
            });
        }
        for j in 0..dim {
            if coefficients[j * dim + j] != 1.0 {
                return Err(Error::Domain(format!(
                    "diagonal coefficient c[{j}][{j}] = {} must be 1",
                    coefficients[j * dim + j]
                )));
            }
            for l in 0..dim {
                let c = coefficients[j * dim + l];
                if !c.is_finite() || c != coefficients[l * dim + j] {
                    return Err(Error::Domain(format!(
                        "coefficient matrix is not symmetric at ({j}, {l})"
                    )));
                }
            }
        }
        let map = Self {
            n_uses,
            coefficients,
        };
        let min = map.min_eigenvalue()?;
        if min < -PSD_SLACK {
            return Err(Error::NotCompletelyPositive { eigenvalue: min });
        }
        Ok(map)
    }

    pub fn identity(n_uses: usize) -> Result<Self> {
        check_uses(n_uses)?;
        let dim = 1usize << n_uses;
        Ok(Self {
            n_uses,
            coefficients: vec![1.0; dim * dim],
        })
    }

    /// `[[1, g], [g, 1]]`.
    pub fn single_use(g: f64) -> Result<Self> {
        check_factor("g", g)?;
        Ok(Self {
            n_uses: 1,
            coefficients: vec![1.0, g, g, 1.0],
        })
    }

    /// One or two uses from `g` and `h±`.
    ///
    /// For two uses the coefficient is `g` when exactly one qubit differs,
    /// `h+` when both differ in the same direction (`00 <-> 11`) and `h-`
    /// when they differ in opposite directions (`01 <-> 10`).
    pub fn from_params(params: &DephasingParams, n_uses: usize) -> Result<Self> {
        match n_uses {
            1 => Self::single_use(params.g),
            2 => {
                check_factor("g", params.g)?;
                check_factor("h_plus", params.h_plus)?;
                check_factor("h_minus", params.h_minus)?;
                let coefficients = gram(2, |d| match (d[0], d[1]) {
                    (0, 0) => 1.0,
                    (0, _) | (_, 0) => params.g,
                    (a, b) if a == b => params.h_plus,
                    _ => params.h_minus,
                });
                Self::from_coefficients(2, coefficients)
            }
            _ => Err(Error::Domain(format!(
                "dephasing parameters describe at most two uses; build {n_uses} uses from bath overlaps"
            ))),
        }
    }

    /// Any number of uses from bath overlaps `I(m tau)`, `m = 0 .. n-1`:
    /// `c_jl = exp(-lambda^2 sum_{k,k'} d_k d_k' I(|k - k'| tau))` with `d = j - l`.
    pub fn from_overlaps(coupling: f64, overlaps: &[f64]) -> Result<Self> {
        let n_uses = overlaps.len();
        check_uses(n_uses)?;
        let l2 = coupling * coupling;
        let coefficients = gram(n_uses, |d| {
            let mut exponent = 0.0;
            for (k, &dk) in d.iter().enumerate() {
                if dk == 0 {
                    continue;
                }
                for (kk, &dkk) in d.iter().enumerate() {
                    if dkk != 0 {
                        exponent += (dk * dkk) as f64 * overlaps[k.abs_diff(kk)];
                    }
                }
            }
            (-l2 * exponent).exp()
        });
        // A positive semidefinite overlap kernel makes C the characteristic
        // function of Gaussian phases, hence positive; only check C otherwise.
        let kernel = ComplexMatrix::from_fn(n_uses, |k, kk| {
            Complex64::new(overlaps[k.abs_diff(kk)], 0.0)
        });
        let kernel_min = hermitian_eigen(&kernel)?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        let scale = overlaps[0].abs().max(f64::MIN_POSITIVE);
        if kernel_min >= -1e-12 * scale {
            return Ok(Self {
                n_uses,
                coefficients,
            });
        }
        Self::from_coefficients(n_uses, coefficients)
    }

    pub fn n_uses(&self) -> usize {
        self.n_uses
    }

    pub fn dim(&self) -> usize {
        1 << self.n_uses
    }

    pub fn coefficient(&self, j: usize, l: usize) -> f64 {
        self.coefficients[j * self.dim() + l]
    }

    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |j, l| {
            Complex64::new(self.coefficient(j, l), 0.0)
        })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = hermitian_eigen(&self.coefficient_matrix())?;
        Ok(eig.values.last().copied().unwrap_or(0.0))
    }

    /// Map acting independently on two registers, `E_a ⊗ E_b`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n_uses = self.n_uses + other.n_uses;
        check_uses(n_uses)?;
        let m = other.dim();
        let dim = self.dim() * m;
        let coefficients = (0..dim * dim)
            .map(|idx| {
                let (j, l) = (idx / dim, idx % dim);
                self.coefficient(j / m, l / m) * other.coefficient(j % m, l % m)
            })
            .collect();
        Ok(Self {
            n_uses,
            coefficients,
        })
    }

    /// `(rho')_jl = c_jl rho_jl`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let m = rho.matrix();
        let out = ComplexMatrix::from_fn(self.dim(), |j, l| m[(j, l)] * self.coefficient(j, l));
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Embeds the map into a larger register: channel use `k` acts on qubit
    /// `acting_on[k]` and every other qubit is left alone.
    pub fn extend(&self, total_qubits: usize, acting_on: &[usize]) -> Result<ExtendedDephasing> {
        if acting_on.len() != self.n_uses {
            return Err(Error::DimensionMismatch {
                expected: self.n_uses,
                found: acting_on.len(),
            });
        }
        for (i, &q) in acting_on.iter().enumerate() {
            if q >= total_qubits {
                return Err(Error::Domain(format!(
                    "qubit {q} out of range for a {total_qubits}-qubit register"
                )));
            }
            if acting_on[..i].contains(&q) {
                return Err(Error::Domain(format!("qubit {q} listed twice")));
            }
        }
        Ok(ExtendedDephasing {
            map: self.clone(),
            total_qubits,
            acting_on: acting_on.to_vec(),
        })
    }
}

fn check_uses(n_uses: usize) -> Result<()> {
    if n_uses == 0 || n_uses > MAX_USES {
        return Err(Error::Domain(format!(
            "number of uses {n_uses} must lie in 1..={MAX_USES}"
        )));
    }
    Ok(())
}

fn check_factor(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} must lie in [0, 1]")));
    }
    Ok(())
}

/// Builds a Gram matrix from a function of the per-use difference `d = j - l`.
fn gram(n_uses: usize, coefficient: impl Fn(&[i32]) -> f64) -> Vec<f64> {
    let dim = 1usize << n_uses;
    let mut out = vec![0.0; dim * dim];
    let mut d = vec![0i32; n_uses];
    for j in 0..dim {
        for l in 0..dim {
            for (k, dk) in d.iter_mut().enumerate() {
                let shift = n_uses - 1 - k;
                *dk = ((j >> shift) & 1) as i32 - ((l >> shift) & 1) as i32;
            }
            out[j * dim + l] = if j == l { 1.0 } else { coefficient(&d) };
        }
    }
    out
}

/// Free-function form of [`DephasingMap::from_params`].
pub fn coefficient_matrix(params: &DephasingParams, n_uses: usize) -> Result<DephasingMap> {
    DephasingMap::from_params(params, n_uses)
}

/// Free-function form of [`DephasingMap::apply`].
pub fn apply_dephasing(rho: &DensityMatrix, map: &DephasingMap) -> Result<DensityMatrix> {
    map.apply(rho)
}

/// Free-function form of [`DephasingMap::extend`].
pub fn extend_with_identity(
    map: &DephasingMap,
    total_qubits: usize,
    acting_on: &[usize],
) -> Result<ExtendedDephasing> {
    map.extend(total_qubits, acting_on)
}

/// A dephasing map tensored with the identity on the remaining qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedDephasing {
    map: DephasingMap,
    total_qubits: usize,
    acting_on: Vec<usize>,
}

impl ExtendedDephasing {
    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    fn restrict(&self, index: usize) -> usize {
        let n = self.total_qubits;
        self.acting_on
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.qubits() != self.total_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.total_qubits,
                found: rho.dim(),
            });
        }
        let restricted: Vec<usize> = (0..rho.dim()).map(|x| self.restrict(x)).collect();
        let m = rho.matrix();
        let out = ComplexMatrix::from_fn(rho.dim(), |x, y| {
            m[(x, y)] * self.map.coefficient(restricted[x], restricted[y])
        });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

/// `(I ⊗ E)(|Ω><Ω|)` for the maximally entangled `|Ω>` on reference ⊗ system.
///
/// Computed by direct embedding of an arbitrary real symmetric coefficient
/// matrix, without assuming it is positive; used to witness complete positivity.
pub fn choi_matrix(n_uses: usize, coefficients: &[f64]) -> Result<ComplexMatrix> {
    check_uses(n_uses)?;
    let dim = 1usize << n_uses;
    if coefficients.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            found: coefficients.len(),
        });
    }
    let amp = 1.0 / (dim as f64).sqrt();
    let mut omega = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        omega[j * dim + j] = Complex64::new(amp, 0.0);
    }
    let projector = ComplexMatrix::outer(&omega, &omega);
    Ok(ComplexMatrix::from_fn(dim * dim, |x, y| {
        projector[(x, y)] * coefficients[(x % dim) * dim + y % dim]
    }))
}

/// A weighted Kraus set `rho -> sum_m w_m K_m rho K_m^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    terms: Vec<(f64, ComplexMatrix)>,
    valid: bool,
}

impl KrausSet {
    /// The set is valid when every weight is non-negative.
    pub fn new(terms: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        let Some(dim) = terms.first().map(|t| t.1.dim()) else {
            return Err(Error::Domain("Kraus set is empty".into()));
        };
        if let Some(t) = terms.iter().find(|t| t.1.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: t.1.dim(),
            });
        }
        let valid = terms.iter().all(|t| t.0 >= 0.0);
        Ok(Self { terms, valid })
    }

    pub fn terms(&self) -> &[(f64, ComplexMatrix)] {
        &self.terms
    }

    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }

    /// `sum_m w_m K_m^dagger K_m`; the identity for a trace-preserving set.
    pub fn completeness(&self) -> ComplexMatrix {
        self.terms
            .iter()
            .fold(ComplexMatrix::zeros(self.dim()), |acc, (w, k)| {
                &acc + &(&k.adjoint() * k).scale(*w)
            })
    }

    /// Coefficient matrix implied by a set of diagonal operators,
    /// `c_jl = sum_m w_m K_m[j] conj(K_m[l])`; `None` if any operator is not diagonal.
    pub fn diagonal_coefficients(&self) -> Option<ComplexMatrix> {
        let dim = self.dim();
        for (_, k) in &self.terms {
            for i in 0..dim {
                for j in 0..dim {
                    if i != j && k[(i, j)].norm() > 0.0 {
                        return None;
                    }
                }
            }
        }
        Some(ComplexMatrix::from_fn(dim, |j, l| {
            self.terms
                .iter()
                .map(|(w, k)| k[(j, j)] * k[(l, l)].conj() * *w)
                .sum()
        }))
    }

    /// Applies the set. Sets with negative weights are refused unless
    /// `allow_invalid` is set; their output need not be a physical state.
    pub fn apply(&self, rho: &DensityMatrix, allow_invalid: bool) -> Result<DensityMatrix> {
        if !self.valid && !allow_invalid {
            return Err(Error::InvalidKrausSet);
        }
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let out = self
            .terms
            .iter()
            .fold(ComplexMatrix::zeros(self.dim()), |acc, (w, k)| {
                &acc + &(&(k * rho.matrix()) * &k.adjoint()).scale(*w)
            });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

/// `{((1+g)/2, I), ((1-g)/2, Z)}`.
pub fn kraus_single(g: f64) -> Result<KrausSet> {
    check_factor("g", g)?;
    KrausSet::new(vec![
        (0.5 * (1.0 + g), ComplexMatrix::identity(2)),
        (0.5 * (1.0 - g), pauli_z()),
    ])
}

/// The six operators `K0 = I⊗I, K1 = I⊗Z, K2 = Z⊗I, K3 = Z⊗Z,
/// K4 = (K1 + K2)/2, K5 = (K0 - K3)/2` for two uses.
pub fn two_use_operators() -> [ComplexMatrix; 6] {
    let i = ComplexMatrix::identity(2);
    let z = pauli_z();
    let k0 = i.kron(&i);
    let k1 = i.kron(&z);
    let k2 = z.kron(&i);
    let k3 = z.kron(&z);
    let k4 = (&k1 + &k2).scale(0.5);
    let k5 = (&k0 - &k3).scale(0.5);
    [k0, k1, k2, k3, k4, k5]
}

/// Weights on [`two_use_operators`] reproducing the two-use map:
/// `(1+2g+h+)/4, (1-h-)/4, (1-h-)/4, (1-2g+h+)/4, (h- - h+)/2, (h- - h+)/2`.
///
/// `p3` is negative when `1 - 2g + h+ < 0`; the set is then flagged invalid
/// even though the map itself stays completely positive.
pub fn kraus_two_paper(g: f64, h_plus: f64, h_minus: f64) -> Result<KrausSet> {
    two_use_set(g, h_plus, h_minus, 0.5)
}

/// Same operators with the last two weights set to `(h- - h+)/4`. This set is
/// not trace preserving: `sum w K^dagger K = (1 - (h- - h+)/4) I`. Kept for
/// regression tests only.
pub fn kraus_two_printed(g: f64, h_plus: f64, h_minus: f64) -> Result<KrausSet> {
    two_use_set(g, h_plus, h_minus, 0.25)
}

fn two_use_set(g: f64, h_plus: f64, h_minus: f64, mixed_weight: f64) -> Result<KrausSet> {
    check_factor("g", g)?;
    check_factor("h_plus", h_plus)?;
    check_factor("h_minus", h_minus)?;
    let w = [
        0.25 * (1.0 + 2.0 * g + h_plus),
        0.25 * (1.0 - h_minus),
        0.25 * (1.0 - h_minus),
        0.25 * (1.0 - 2.0 * g + h_plus),
        mixed_weight * (h_minus - h_plus),
        mixed_weight * (h_minus - h_plus),
    ];
    KrausSet::new(w.into_iter().zip(two_use_operators()).collect())
}

/// Two-use set built only from products of single-use operators,
/// `sum p(m1, m2) B_m1 ⊗ B_m2 rho (B_m1 ⊗ B_m2)^dagger`, with weights on
/// `(I⊗I, I⊗Z, Z⊗I, Z⊗Z)`.
pub fn correlated_product(weights: [f64; 4]) -> Result<KrausSet> {
    let ops = two_use_operators();
    KrausSet::new(weights.into_iter().zip(ops).take(4).collect())
}

/// Diagonal Kraus set from the spectral decomposition `C = sum_v mu_v v v^dagger`.
///
/// Each operator is `diag(v)` rescaled so its largest entry is `+1`, with the
/// weight absorbing the scale; eigenvalues at or below `1e-12` are dropped.
pub fn kraus_canonical(map: &DephasingMap) -> Result<KrausSet> {
    let eig = hermitian_eigen(&map.coefficient_matrix())?;
    if let Some(&min) = eig.values.last() {
        if min < -PSD_SLACK {
            return Err(Error::NotCompletelyPositive { eigenvalue: min });
        }
    }
    let mut terms = Vec::new();
    for (k, &mu) in eig.values.iter().enumerate() {
        if mu <= KRAUS_PRUNE {
            continue;
        }
        let v = eig.vector(k);
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let pivot = *v
            .iter()
            .find(|z| z.norm() >= max * (1.0 - 1e-12))
            .expect("nonzero eigenvector");
        let scaled: Vec<Complex64> = v.iter().map(|z| z / pivot).collect();
        terms.push((mu * pivot.norm_sqr(), ComplexMatrix::diagonal(&scaled)));
    }
    KrausSet::new(terms)
}

/// Free-function form of [`KrausSet::apply`].
pub fn apply_kraus(
    set: &KrausSet,
    rho: &DensityMatrix,
    allow_invalid: bool,
) -> Result<DensityMatrix> {
    set.apply(rho, allow_invalid)
}

/// Applies a dephasing map to one half of `psi` (reference qubits first) and
/// returns the joint output state.
pub(crate) fn apply_to_system_half(psi: &PureState, map: &DephasingMap) -> Result<DensityMatrix> {
    let total = psi.qubits();
    let n = map.n_uses();
    if total < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: total,
        });
    }
    let acting: Vec<usize> = (total - n..total).collect();
    map.extend(total, &acting)?.apply(&psi.projector())
}
