use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable tables differ: {left:?} vs {right:?}")]
    VarTableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero polynomial has no roots to isolate")]
    ZeroPolynomial,

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown system `{id}`; available: {}", available.join(", "))]
    UnknownSystem { id: String, available: Vec<String> },

    #[error("invalid system definition: {0}")]
    InvalidSystem(String),

    #[error("weight tuple out of bounds: {0}")]
    InvalidWeight(String),

    #[error("n = {0} is outside the supported range 1..=3")]
    UnsupportedRank(usize),

    #[error("monomial `{monomial}` has weighted degree {degree} above the declared degree {declared}")]
    AboveDeclaredDegree {
        monomial: String,
        degree: i64,
        declared: i64,
    },

    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("point is not a balance: residual {0:e}")]
    NotABalance(f64),

    #[error("exact arithmetic required: {0}")]
    NotExact(String),

    #[error("series is obstructed at order {0}")]
    Obstructed(usize),

    #[error("nonpositive weight on `{0}`; weighted blow-up needs positive weights")]
    NonpositiveWeight(String),

    #[error("trajectory left the ball of radius {radius:e} at t = {t}")]
    Escape { radius: f64, t: f64 },

    #[error("{0}")]
    Io(String),
}
