//! Measures on uniform torus grids, their moments, and the passage from
//! resolvent samples back to measures.

mod fft;
pub mod invert;
pub mod measure;
pub mod polar;
pub mod table;
pub mod taylor;

pub use invert::invert_grid_measure;
pub use measure::{grid_angle, GridOperatorMeasure, GridScalarMeasure, MeasureResolvent};
pub use polar::{hermitian_symmetry_check, polarize, uniqueness_witness, uniqueness_witness_for, UniquenessVerdict};
pub use table::{moments_from_measure, power_moments, MomentKind, MomentTable};
pub use taylor::{taylor_moments_from_sampler, taylor_moments_with, ChartSamples, TaylorConfig};
