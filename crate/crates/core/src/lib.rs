pub mod dilation;
pub mod error;
pub mod grid;
pub mod instance;
pub mod iso;
pub mod linalg;
pub mod moments;
pub mod pair;
pub mod random;
pub mod report;
pub mod single;
pub mod tol;

pub use error::{Error, Result};
pub use grid::SampleGrid;
pub use instance::{generate, Instance, InstanceKind, InstanceSpec};
pub use report::{ConditionResult, VerificationReport};
