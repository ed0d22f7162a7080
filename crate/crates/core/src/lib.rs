//! Numerical-range geometry of complex matrices and margin-reporting checks of
//! eigenvalue and norm inequalities for positive 2×2 block matrices.
//!
//! Modules, bottom-up:
//! - [`linalg`]: Hermitian eigensolver, SVD, functional calculus, norms.
//! - [`numrange`]: support function, width, inradius, distance to scalars.
//! - [`ellwidth`]: the elliptical width `δ₂` and its closed-form lower bounds.
//! - [`blockpos`]: validated positive block matrices and instance generators.
//! - [`verify`]: one verifier per inequality plus a batch driver.
//! - [`explore`]: reproducible extremal searches.

// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockpos;
pub mod digest;
pub mod ellwidth;
pub mod error;
pub mod explore;
pub mod linalg;
pub mod numrange;
pub mod parallel;
pub mod rng;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
