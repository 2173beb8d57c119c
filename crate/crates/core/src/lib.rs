//! Corner-type irreducible representations of the A-type Hecke algebra,
//! the open Hecke chain Hamiltonian built from them, and exact or numerical
//! verification of the identities relating them.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: exact rational and floating point backends, q-integers.
//! - [`matrix`]: dense matrices over either backend.
//! - [`corner`]: tableau basis, generator matrices, defining relations.
//! - [`hamiltonian`]: the traceless chain Hamiltonian, the l = 1 closed form,
//!   the intertwiner C(q) and the large-q limit.
//! - [`spectrum`]: predicted cosine spectra, explicit eigenvectors and
//!   numerical eigenvalue checks.
//! - [`wedge`]: tensor powers, the antisymmetrizer and the wedge-power
//!   realisation of the general corner representation.
//! - [`report`] and [`export`]: verification records and file formats.

pub mod corner;
pub mod error;
pub mod export;
pub mod hamiltonian;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod wedge;

pub use corner::{enumerate_basis, Basis, BasisIndex, CornerRep, CornerShape, DEFAULT_DIM_CAP};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use report::{CheckRecord, Residual, VerificationReport};
pub use scalar::{q_int, Backend, QParam, Rational, Scalar};
