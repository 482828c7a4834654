//! braidlab: a numerical laboratory for adiabatic braiding of Majorana zero
//! modes emulated on small Kitaev-lattice spin systems.
//!
//! The crate builds the four- and ten-qubit Y-junction Hamiltonians, verifies
//! their conserved-quantity algebra, projects onto gauge sectors to obtain
//! effective Hamiltonians, computes non-Abelian holonomies along clock-arm
//! paths, executes the Trotterized braiding protocol as a two-qubit gate
//! schedule, and scores every realized gate with Choi-matrix process fidelity.
//!
//! Everything runs on dense statevectors or density matrices of at most ten
//! qubits, which keeps every quantity exactly checkable against independent
//! dense-matrix oracles.
//!
//! Entry points by capability:
//! - [`pauli`]: phased Pauli strings and weighted sums (Hamiltonians).
//! - [`model`]: the three spin systems, conserved charges, logical operators.
//! - [`engine`]: statevector / density-matrix simulation and sampling.
//! - [`majorana`]: fermionic-representation reference models.
//! - [`subspace`]: simultaneous eigenbases and effective Hamiltonians.
//! - [`holonomy`]: gauge fields, frames, Wilson-loop holonomies.
//! - [`protocol`]: clock paths, Trotter plans, logical state preparation,
//!   braid execution and logical-gate extraction, circuit export.
//! - [`tomography`]: logical state tomography, Choi matrices, process fidelity.
//! - [`runner`]: experiment configs, verification/sweep/tomography pipelines.

pub mod engine;
pub mod holonomy;
pub mod linalg;
pub mod majorana;
pub mod model;
pub mod pauli;
pub mod protocol;
pub mod runner;
pub mod subspace;
pub mod tomography;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("dense realization capped at {cap} qubits, got {n}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("operator is not Hermitian (max imaginary residual {0:.3e})")]
    NotHermitian(f64),
    #[error("operators do not all commute: pair ({0}, {1})")]
    NonCommuting(usize, usize),
    #[error("empty subspace selection")]
    EmptySelection,
    #[error("spectral gap closed along path: {0}")]
    GapClosure(String),
    #[error("state is not in density-matrix mode")]
    NotDensityMatrix,
    #[error("expected a single Pauli string observable")]
    MultiTermObservable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("extracted gate leaked {0:.3} of its norm out of the code subspace")]
    ExcessiveLeakage(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
