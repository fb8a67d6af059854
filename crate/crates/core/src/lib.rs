//! Tree tensor operators for mixed many-body states and convex-roof
//! estimates of their entanglement of formation.
//!
//! A density matrix is carried as a purification factor `X` with `ρ = XX†`.
//! [`tto::compress_to_root`] splits `X` into two isometric branches and a
//! root, and [`eof::minimize_eof`] searches decompositions of the root (or
//! of `X` itself) for the smallest average entanglement.

// comparisons are written as `!(x > 0.0)` on purpose so NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod cli;
pub mod eof;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod scaling;
pub mod simplex;
pub mod spin_models;
pub mod tto;

pub use error::{Error, Result};
