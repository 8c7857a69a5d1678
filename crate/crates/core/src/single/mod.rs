//! One isometric operator: defect subspaces, Schur parameters and
//! generalized resolvents.

pub mod isometry;
pub mod resolvent;
pub mod schur;
pub mod verify;

pub use isometry::{defect_subspaces, PartialIsometry};
pub use resolvent::{
    chumakin_resolvent, extension_at, resolvent_from_extension, ChumakinSampler, ExtensionSampler, FnSampler,
    ResolventSampler,
};
pub use schur::SchurParameter;
pub use verify::{verify_theorem_1_2, verify_theorem_1_3};
