//! An isometric operator commuting with a unitary: the commuting parameter
//! class, the resolvent builder, conjugation factorizations and the
//! correspondence between commutant parameters and class members.

pub mod builder;
pub mod frame;
pub mod godic;
pub mod pair;

pub use builder::{build_iso_unitary_resolvent, separation, two_sided_residual, IsoUnitaryResolvent};
pub use frame::{
    build_theta, commutant_residual, phi_to_psi, psi_to_phi, reflection_residual, DefectConjugationFrame,
};
pub use godic::{factor_residual, godic_lucenko_factor};
pub use pair::{check_class_svu, iso_unitary_commutation, svu_membership, IsoUnitaryPair};
