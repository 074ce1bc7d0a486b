use thiserror::Error;

/// Errors raised across the certification pipeline.
///
/// Variants split into input/precondition problems and internal faults; the
/// CLI maps them onto exit codes 2 and 1 via [`Error::is_internal`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("negative value {value} in {what}")]
    NegativeValue { what: String, value: f64 },

    #[error("duplicate grid point {0:?}")]
    DuplicatePoint(Vec<f64>),

    #[error("off-grid query at {0:?}: table functions do not interpolate")]
    OffGrid(Vec<f64>),

    #[error("grid too large: {size} exceeds cap {cap}")]
    GridTooLarge { size: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target outside convex hull of grid points")]
    TargetOutsideHull,

    #[error("ones-vector outside convex hull of grid points; add points around (1,...,1)")]
    OnesOutsideHull,

    #[error("not a counterexample: envelope value {0} does not exceed 1 beyond tolerance")]
    NotACounterexample(f64),

    #[error("oracle guard exceeded: n={n}, K={k} (limits n<=25, K<=4)")]
    GuardExceeded { n: usize, k: usize },

    #[error("invalid draw count {0}")]
    InvalidDraws(u64),

    #[error("solver stalled after {0} pivots")]
    SolverStalled(usize),

    #[error("internal solver fault: {0}")]
    SolverFault(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::SolverStalled(_) | Error::SolverFault(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
