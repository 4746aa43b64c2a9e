//! Finite-dimensional base algebras and matrices over them.
//!
//! A [`BaseAlgebra`] is either the full matrix algebra of size `k` or the
//! commutative algebra of diagonal `k × k` matrices. Elements are plain
//! `k × k` [`ComplexMatrix`] values (diagonal ones for the diagonal kind);
//! [`MatOverB`] realizes level-`n` matrices over the algebra. Linear
//! [`Functional`]s are represented by a dual matrix `A` via
//! `φ(X) = Tr(X · Aᵗ)`.

mod algebra;
mod error;
mod functional;
mod matover;

pub use algebra::{AlgebraKind, BaseAlgebra};
pub use error::BaseError;
pub use functional::{dual_basis, trace_state, Functional};
pub use matover::MatOverB;
