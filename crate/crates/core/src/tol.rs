//! Default numerical tolerances.
//!
//! All values are absolute and calibrated for double precision at
//! dimensions up to 64.

/// Orthonormality, idempotence and unitarity residuals.
pub const ORTHO: f64 = 1e-10;
/// Commutator residual, relative to the product of the operator norms.
pub const COMMUTE: f64 = 1e-8;
/// Reconstruction residual of spectral decompositions and measure sums.
pub const RECONSTRUCT: f64 = 1e-8;
/// Slack for positive semidefiniteness (smallest admissible eigenvalue is `-PSD`).
pub const PSD: f64 = 1e-8;
/// Singular value threshold for numerical rank decisions.
pub const RANK: f64 = 1e-12;
/// Arguments with `||z| - 1| <= CIRCLE` are treated as lying on the unit circle.
pub const CIRCLE: f64 = 1e-12;
/// Largest accepted condition number of a resolvent bracket.
pub const KAPPA_MAX: f64 = 1e12;
/// Angular gap below which eigenvalues are merged into one cluster.
pub const CLUSTER: f64 = 1e-8;
/// Norm slack allowed when certifying a contraction.
pub const SCHUR: f64 = 1e-8;
/// Acceptance tolerance for the condition verifiers.
pub const ACCEPT: f64 = 1e-8;
/// Tolerance of the Cauchy reproduction used as an analyticity surrogate.
pub const ANALYTIC: f64 = 1e-6;
/// Disagreement allowed between the two extrapolants of a limit at infinity.
pub const LIMIT: f64 = 1e-6;
/// Moment agreement between overlapping Taylor charts.
pub const MOMENT: f64 = 1e-8;
/// Atoms with operator norm at or below this are dropped by the dilation.
pub const ATOM: f64 = 1e-12;
/// Commutator residual for membership in the commuting Schur class.
pub const SVU: f64 = 1e-9;
/// Residual accepted by the reconstruction certificate.
pub const CERTIFY: f64 = 1e-7;
