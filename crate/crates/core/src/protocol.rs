//! One-ancilla coding scheme for sharing entanglement over two correlated uses.
//!
//! The sender holds `Q` of a Bell pair `RQ` and an ancilla `A`. A CNOT from
//! `Q` to `A` encodes, both `Q` and `A` go through the two-use channel, and a
//! second CNOT decodes. Registers are ordered `R ⊗ Q ⊗ A`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bath::DephasingParams;
use crate::channel::DephasingMap;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::qstate::{state_fidelity, DensityMatrix, PureState};

/// Tolerance for the factorization check on the decoded state.
pub const FACTOR_TOL: f64 = 1e-10;
/// Slack when comparing coded and uncoded fidelities.
pub const ADVANTAGE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn state(self) -> PureState {
        let amps: [f64; 4] = match self {
            BellLabel::PhiPlus => [1.0, 0.0, 0.0, 1.0],
            BellLabel::PhiMinus => [1.0, 0.0, 0.0, -1.0],
            BellLabel::PsiPlus => [0.0, 1.0, 1.0, 0.0],
            BellLabel::PsiMinus => [0.0, 1.0, -1.0, 0.0],
        };
        PureState::from_real(&amps).expect("nonzero amplitudes")
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellLabel::PhiPlus => "phi_plus",
            BellLabel::PhiMinus => "phi_minus",
            BellLabel::PsiPlus => "psi_plus",
            BellLabel::PsiMinus => "psi_minus",
        })
    }
}

impl FromStr for BellLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::Domain(format!("unknown Bell state '{s}'")))
    }
}

/// Initial ancilla state. `Zero` lands the encoded pair in the `{|00>, |11>}`
/// sector and serves as a negative control.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AncillaInit {
    #[default]
    One,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    /// Decoded state of `RQ`.
    pub final_rq: DensityMatrix,
    /// Decoded ancilla.
    pub ancilla_out: DensityMatrix,
    /// `<bell| final_rq |bell>`.
    pub fidelity: f64,
    /// Whether the decoded `RQA` state equals `final_rq ⊗ ancilla_out`.
    pub disentangled: bool,
}

/// CNOT on three qubits `R Q A` with control `Q` and target `A`.
fn cnot_qa() -> ComplexMatrix {
    ComplexMatrix::from_fn(8, |row, col| {
        let image = if col & 0b010 != 0 { col ^ 0b001 } else { col };
        if row == image {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn run_protocol(bell: BellLabel, params: &DephasingParams) -> Result<ProtocolResult> {
    run_protocol_with(bell, params, AncillaInit::One)
}

pub fn run_protocol_with(
    bell: BellLabel,
    params: &DephasingParams,
    ancilla: AncillaInit,
) -> Result<ProtocolResult> {
    let map = DephasingMap::from_params(params, 2)?;
    let a = PureState::basis(1, if ancilla == AncillaInit::One { 1 } else { 0 })?;
    let psi_rq = bell.state();
    let start = psi_rq.tensor(&a).projector();

    let cnot = cnot_qa();
    let encoded = start.conjugate(&cnot)?;
    let sent = map.extend(3, &[1, 2])?.apply(&encoded)?;
    let decoded = sent.conjugate(&cnot)?;

    let final_rq = decoded.partial_trace(&[0, 1])?;
    let ancilla_out = decoded.partial_trace(&[2])?;
    let disentangled = decoded.max_abs_diff(&final_rq.tensor(&ancilla_out)) <= FACTOR_TOL;
    let fidelity = state_fidelity(&psi_rq, &final_rq)?;
    Ok(ProtocolResult {
        final_rq,
        ancilla_out,
        fidelity,
        disentangled,
    })
}

/// `(1 + g) / 2`, one Bell half sent through a single use.
pub fn uncoded_baseline(params: &DephasingParams) -> f64 {
    0.5 * (1.0 + params.g)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Advantage {
    pub coded: f64,
    pub uncoded: f64,
    pub advantageous: bool,
}

/// Compares the simulated coded fidelity with the uncoded baseline.
pub fn protocol_advantage(params: &DephasingParams) -> Result<Advantage> {
    let coded = run_protocol(BellLabel::PhiPlus, params)?.fidelity;
    let uncoded = uncoded_baseline(params);
    Ok(Advantage {
        coded,
        uncoded,
        advantageous: coded + ADVANTAGE_TOL >= uncoded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(g: f64, gamma: f64) -> DephasingParams {
        DephasingParams::from_factors(g, gamma).unwrap()
    }

    #[test]
    fn cnot_is_a_permutation() {
        let c = cnot_qa();
        assert!((&c * &c).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
        // |R Q A> = |0 1 1> -> |0 1 0>
        assert_eq!(c[(0b010, 0b011)].re, 1.0);
        assert_eq!(c[(0b001, 0b001)].re, 1.0);
    }

    #[test]
    fn encoding_matches_hand_computation() {
        let start = BellLabel::PhiPlus
            .state()
            .tensor(&PureState::basis(1, 1).unwrap());
        let encoded = start.projector().conjugate(&cnot_qa()).unwrap();
        // (|001> + |110>)/sqrt2
        let expected = PureState::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0])
            .unwrap()
            .projector();
        assert!(encoded.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn perfect_memory_is_lossless() {
        let r = run_protocol(BellLabel::PhiPlus, &params(0.3, 1.0)).unwrap();
        assert_abs_diff_eq!(r.fidelity, 1.0, epsilon = 1e-12);
        assert!(r.disentangled);
    }

    #[test]
    fn memoryless_coding_hurts() {
        let g = 0.5;
        let r = run_protocol(BellLabel::PhiPlus, &params(g, 0.0)).unwrap();
        assert_abs_diff_eq!(r.fidelity, 0.5 * (1.0 + g * g), epsilon = 1e-12);
        assert!(r.fidelity < uncoded_baseline(&params(g, 0.0)));
    }

    #[test]
    fn partial_memory_example() {
        let r = run_protocol(BellLabel::PhiPlus, &params(0.5, 0.75)).unwrap();
        assert_abs_diff_eq!(r.fidelity, 0.5 * (1.0 + 0.5f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(r.fidelity, 0.853553, epsilon = 1e-6);
    }

    #[test]
    fn ancilla_returns_to_one() {
        let one = PureState::basis(1, 1).unwrap().projector();
        for bell in BellLabel::ALL {
            let r = run_protocol(bell, &params(0.4, 0.3)).unwrap();
            assert!(r.ancilla_out.max_abs_diff(&one) < 1e-12);
        }
    }

    #[test]
    fn zero_ancilla_is_anti_protected() {
        let p = params(0.5, 1.0);
        let r = run_protocol_with(BellLabel::PhiPlus, &p, AncillaInit::Zero).unwrap();
        assert_abs_diff_eq!(r.fidelity, 0.5 * (1.0 + p.h_plus), epsilon = 1e-12);
    }

    #[test]
    fn baseline_values() {
        assert_eq!(uncoded_baseline(&params(1.0, 0.2)), 1.0);
        assert_eq!(uncoded_baseline(&params(0.0, 0.2)), 0.5);
        assert_eq!(uncoded_baseline(&params(0.5, 0.2)), 0.75);
    }

    #[test]
    fn advantage_examples() {
        let edge = protocol_advantage(&params(0.3, 0.5)).unwrap();
        assert_abs_diff_eq!(edge.coded, 0.65, epsilon = 1e-12);
        assert_abs_diff_eq!(edge.uncoded, 0.65, epsilon = 1e-15);
        assert!(edge.advantageous);
        let strong = protocol_advantage(&params(0.2, 0.9)).unwrap();
        assert!(strong.advantageous);
        assert_abs_diff_eq!(
            strong.coded,
            0.5 * (1.0 + 0.2f64.powf(0.2)),
            epsilon = 1e-12
        );
        let clean = protocol_advantage(&params(1.0, 0.1)).unwrap();
        assert_abs_diff_eq!(clean.coded, 1.0, epsilon = 1e-12);
        assert_eq!(clean.uncoded, 1.0);
    }

    #[test]
    fn bell_labels_round_trip() {
        for b in BellLabel::ALL {
            assert_eq!(b.to_string().parse::<BellLabel>().unwrap(), b);
        }
        assert!("bell".parse::<BellLabel>().is_err());
    }
}
