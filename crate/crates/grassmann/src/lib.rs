//! Grassmannian of complemented columns over a finite-dimensional
//! C*-algebra: points, group actions, the operator resolvent attached to a
//! point, difference quotients against coupled probe points, and the
//! fractional-linear disk family.

mod disks;
mod embedding;
mod error;
mod point;
mod quotient;
mod resolvent;

pub use disks::{in_disk, mixed_ball_point, mixed_g_matrix, DiskKind};
pub use embedding::Embedding;
pub use error::GrassError;
pub use point::{cayley_matrix, gl2_swap, swap_unitary, symplectic_w, GrassPoint};
pub use quotient::{
    entrywise_tensor, grass_diff_quotient, probe_point, quotient_block, ProbeMode,
};
pub use resolvent::{
    in_resolvent_set, resolvent, resolvent_closed_form, resolvent_star_residual,
    unitary_identities, UnitaryReport,
};
