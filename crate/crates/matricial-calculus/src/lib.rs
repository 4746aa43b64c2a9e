//! Numerical calculus for fully matricial functions.
//!
//! A [`MatricialFn`] wraps an evaluator `M_n(B) → M_n(C)` declared on a norm
//! ball. On top of it sit the block-embedding difference quotient and its
//! iterate, the numeric grading derivative, Taylor-coefficient extraction at
//! nilpotent ladder points, and composition of coefficient families.

mod error;
mod family;
mod function;

pub use error::CalcError;
pub use family::{
    compose_families, evaluate_family, family_from_poly, family_from_poly_vec, family_to_poly,
    CoefficientFamily,
};
pub use function::{
    diff_quotient, diff_quotient_nested, lambda_numeric, matricial_law_residual, tensor_entry,
    BlockMode, MatricialFn,
};
