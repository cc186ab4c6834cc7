//! Detection of quantum correlations in small multipartite systems.
//!
//! The crate bundles dense complex linear algebra, a log-det barrier SDP solver,
//! a state catalog, entanglement and discord measures, SDP-built witnesses,
//! three-qubit SLOCC classification, a bound-entanglement test and a level-2
//! moment-matrix locality test. Expectations are in σ units throughout.

pub mod boundent;
pub mod circuits;
pub mod classify3q;
pub mod density;
pub mod error;
pub mod measures;
pub mod npa;
pub mod pauli;
pub mod reproduce;
pub mod sdp;
pub mod states;
pub mod tensor;
pub mod witnesses;

pub use density::{DensityMatrix, PureState};
pub use error::{Error, Result};
pub use pauli::{gell_mann, LocalOp, Pauli, PauliProductObservable};
pub use tensor::{
    hermitian_eig, kron, partial_trace_op, partial_transpose_op, psd_sqrt, realign,
    singular_values, trace_norm, ComplexMatrix, HermitianEig, C64,
};
pub use classify3q::{ClassificationVerdict, SlOccClass};
pub use sdp::{LmiBlock, LmiProblem, SdpSolution, SdpStatus};
