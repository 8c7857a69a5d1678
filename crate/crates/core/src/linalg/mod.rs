//! Dense complex linear algebra shared by every other module.

pub mod conjugation;
pub mod embedded;
pub mod joint;
pub mod json;
pub mod matrix;
pub mod subspace;
pub mod unitary;

pub use conjugation::Conjugation;
pub use embedded::EmbeddedSpace;
pub use joint::{joint_eigendecomposition, JointAtom};
pub use matrix::{c64, identity, CMatrix, CVector, ExtPoint, C64, IMAG, ONE, ZERO};
pub use subspace::{complement, orthonormalize, Subspace};
pub use unitary::{cayley_transform, herglotz_kernel, UnitaryOperator};
