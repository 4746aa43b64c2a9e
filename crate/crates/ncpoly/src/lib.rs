//! Noncommutative polynomials in the generators `z(φ)` indexed by the dual
//! basis of a base algebra.
//!
//! Words are sequences of dual-basis indices; the empty word is the unit.
//! The crate provides free-algebra arithmetic, fully matricial evaluation,
//! the symbolic difference quotient `∂` (a coproduct-valued derivation), the
//! grading map `Λ` (degree + 1 on monomials), the star antiautomorphism, and
//! the antisymmetrization construction used to produce polynomials that
//! vanish identically at low matricial levels.

mod error;
mod pathological;
mod poly;
mod tensor;

pub use error::NcError;
pub use pathological::{antisymmetrize, build_pathological, PathologicalRun, PathologicalStage};
pub use poly::{star_index, NCPoly, DEGREE_CAP};
pub use tensor::{NCTensor, NCTensor3};
