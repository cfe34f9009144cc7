//! Positive maps on matrix algebras: positivity deciders, Perron-Frobenius
//! spectral data, multiplicative domains of powers, and the index of
//! primitivity with the bounds relating it to the dimension.

// `!(x > t)` is used on purpose so that NaN counts as failing the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod multdomain;
pub mod optimize;
pub mod positivity;
pub mod primindex;
pub mod spectral;
pub mod subspace;
pub mod superop;

pub use config::{SearchBudget, Tolerances};
pub use error::{Error, Result};
pub use matrix::{CMatrix, InnerProduct};
pub use subspace::SubspaceBasis;
pub use superop::{Normalized, SuperOp};
