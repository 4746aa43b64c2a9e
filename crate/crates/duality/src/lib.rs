//! The duality transform carrying functionals on the ambient algebra to
//! scalar-valued families on Grassmannian points, with verifiers for its
//! comultiplication, trace-symmetry, scaling-derivative, involution, and
//! complete-positivity relations.

mod error;
mod positivity;
mod setup;
mod transform;

pub use error::DualityError;
pub use positivity::{choi_matrix, dual_positivity_check, PositivityReport};
pub use setup::DualitySetup;
pub use transform::{
    injectivity_rank, scaling_identity_residual, transform, transform_quotient,
    verify_comultiplication, verify_lambda_duality, verify_star_duality, verify_trace_symmetry,
};
