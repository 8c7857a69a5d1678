//! Pairs of commuting unitaries, their generalized resolvents and the
//! two-variable condition verifiers.

pub mod commuting;
pub mod h2;
pub mod limits;
pub mod spectral;
pub mod verify;

pub use commuting::{pair_resolvent, CommutingUnitaryPair, FnPair, PairSample, PairSampler, TabulatedPairSampler};
pub use h2::{check_h2_membership, H2Report};
pub use limits::{extend_to_infinity, extended_eval, ExtendedSampler};
pub use spectral::{check_integral_representation, spectral_function, SpectralAtom, SpectralFunctionAtlas};
pub use verify::{commutativity_residual, verify_theorem_3_1, verify_theorem_3_1_with, verify_theorem_3_2};
