//! Topological color codes on 2-colexes and the three-body Ising models dual
//! to them.
//!
//! The library builds trivalent lattices with 3-colorable faces (2-colexes),
//! the stabilizer code living on their vertices, and the classical spin system
//! living on their dual triangulation, and verifies at machine precision that
//! code-state overlaps with product states equal partition functions of the
//! spin system: `Z = 2^N * O` for real couplings, its complex-coupling and
//! external-field generalizations, and the sequential-measurement view used in
//! measurement-based computation.
//!
//! Modules mirror the two sides of the correspondence:
//!
//! - [`colex`]: lattice construction and validation (closed tori, bordered
//!   patches, dual triangulations).
//! - [`pauli`]: binary symplectic stabilizer algebra over GF(2), string-nets
//!   and the color boundary operator.
//! - [`codestate`]: dense state vectors for code states and their overlaps.
//! - [`spinmodel`]: exact and high-temperature partition functions, ground
//!   states, transfer-matrix criticality estimates and duality.
//! - [`correspondence`]: the overlap/partition identities and the MQC sampler.
//! - [`cluster`]: the bipartite cluster state that prepares a code state and
//!   the external-field identity.
//!
//! Numeric routines are generic over the scalar type through [`Real`];
//! `f64` is the default used by the CLI and all shipped tolerances.

pub mod cluster;
pub mod codestate;
pub mod colex;
pub mod correspondence;
mod error;
pub mod gf2;
pub mod pauli;
pub mod scalar;
pub mod spinmodel;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default real scalar.
pub type R64 = f64;
/// Default complex scalar.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex scalar, for callers trading accuracy for memory.
pub type C32 = num_complex::Complex<f32>;

/// Largest qubit count for dense state vectors (2^n complex amplitudes).
pub const DENSE_QUBIT_CAP: usize = 24;
/// Largest site count for exhaustive spin-configuration sums.
pub const SPIN_SITE_CAP: usize = 24;
/// Largest triangle count for exhaustive chain sums in the expansion route.
pub const CHAIN_CAP: usize = 24;
/// Largest GF(2) span rank that enumeration iterators will walk (2^rank nets).
pub const SPAN_RANK_CAP: usize = 24;
/// Largest periodic strip width for the transfer matrix (2^width states).
pub const TRANSFER_WIDTH_CAP: usize = 12;
