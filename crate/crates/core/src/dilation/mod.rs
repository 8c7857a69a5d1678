//! From a two-variable generalized resolvent back to a pair of commuting
//! unitaries: measure recovery, dilation to a projection-valued measure,
//! spectral families and certification.

pub mod family;
pub mod naimark;
pub mod pipeline;
pub mod recover;

pub use family::{build_commuting_unitaries, build_spectral_families, SpectralFamilyPair};
pub use naimark::{naimark_dilate, naimark_dilate_minimal, NaimarkDilation};
pub use pipeline::{
    rebuild_from_measure, reconstruct_and_certify, reconstruct_from_measure, reproduction_residual, Certification,
    ReconstructOptions,
};
pub use recover::{operator_measure_from_sampler, operator_measure_unverified};
