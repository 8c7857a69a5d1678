use num_complex::Complex64 as C64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {0} lies on the unit circle")]
    UnitModulusArgument(C64),

    #[error("argument {0} lies outside the open unit disk")]
    OutsideDisk(C64),

    #[error("resolvent is numerically singular (condition estimate {0:.3e})")]
    SingularResolvent(f64),

    #[error("operators do not commute (commutator norm {0:.3e})")]
    NotCommuting(f64),

    #[error("isometric operators violate the commutativity relation (residual {0:.3e})")]
    CommutativityViolated(f64),

    #[error("limit at infinity does not settle (spread {0:.3e})")]
    LimitDivergence(f64),

    #[error("Taylor charts disagree on shared moments (residual {0:.3e})")]
    ChartInconsistency(f64),

    #[error("measures live on different grids ({0}x{1} vs {2}x{3})")]
    GridMismatch(usize, usize, usize, usize),

    #[error("sampled function is not a generalized resolvent: {0}")]
    NotAResolvent(String),

    #[error(
        "atom at cell ({j}, {k}) has eigenvalue {eigenvalue:.3e}; \
         the measure is probably not supported on this grid, try grid {hint}"
    )]
    NegativeAtom {
        j: usize,
        k: usize,
        eigenvalue: f64,
        hint: usize,
    },

    #[error("operator measure does not sum to the identity (residual {0:.3e})")]
    NotNormalized(f64),

    #[error("parameter is not in the commuting Schur class (residual {0:.3e})")]
    NotInClass(f64),

    #[error("parameter does not commute with the restricted unitary (residual {0:.3e})")]
    CommutantViolation(f64),

    #[error("conjugation frame mismatch: {0}")]
    FrameMismatch(String),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not a conjugation: {0}")]
    NotConjugation(String),

    #[error("operator is not isometric on its domain (residual {0:.3e})")]
    NotIsometric(f64),

    #[error("parameter is not contractive (max norm {0:.6})")]
    NotContractive(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
