//! Exact simulation of a qubit dephasing channel whose uses share a bosonic
//! bath, so that noise on successive uses is correlated.
//!
//! The crate goes from a bath power spectrum to dephasing parameters
//! ([`bath`]), builds one-, two- and N-use maps and their Kraus sets
//! ([`channel`]), evaluates entanglement fidelity, entropy exchange and
//! coherent information ([`infometrics`]) and simulates a one-ancilla coding
//! scheme that exploits the memory ([`protocol`]).
//!
//! ```
//! use dephaser::{DephasingParams, PqInput, two_use_family_metrics};
//!
//! let params = DephasingParams::from_factors(0.5, 1.0).unwrap();
//! let m = two_use_family_metrics(PqInput::new(0.9).unwrap(), &params);
//! assert!((m.fe - 0.9053125).abs() < 1e-12);
//! ```

pub mod bath;
pub mod channel;
pub mod cli;
pub mod error;
pub mod infometrics;
pub mod linalg;
pub mod protocol;
pub mod qstate;
pub mod quadrature;

pub use bath::{dephasing_params, overlap_integral, ChannelTiming, DephasingParams, SpectralModel};
pub use channel::{
    apply_dephasing, apply_kraus, extend_with_identity, kraus_canonical, kraus_single,
    kraus_two_paper, DephasingMap, KrausSet,
};
pub use error::{Error, Result};
pub use infometrics::{
    coherent_information, entanglement_fidelity, entropy_exchange, optimize_p,
    single_use_closed_forms, two_use_family_metrics, BlochInput, MetricsReport, PqInput,
};
pub use linalg::ComplexMatrix;
pub use protocol::{protocol_advantage, run_protocol, uncoded_baseline, BellLabel, ProtocolResult};
pub use qstate::{purify, von_neumann_entropy, DensityMatrix, PureState};
