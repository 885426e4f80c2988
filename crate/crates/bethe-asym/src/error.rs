use thiserror::Error;

/// Crate-wide error type. Numeric failures carry enough context to name the
/// violated precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix: pivot magnitude {pivot:e} in column {column} (dimension {dim})")]
    SingularMatrix { column: usize, pivot: f64, dim: usize },

    #[error("root not bracketed: f({lo}) = {flo:e}, f({hi}) = {fhi:e}")]
    NoBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("no Fermi sea: {0}")]
    NoFermiSea(String),

    #[error("point {0} lies on the cut [-q, q]")]
    OnCut(String),

    #[error("contour violates the analyticity constraint: {0}")]
    ContourAnalyticity(String),

    #[error("Barnes G vanishes at the requested argument ({0})")]
    BarnesZero(String),

    #[error("Gamma function pole at {0}")]
    GammaPole(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("beta = 0 is a removable limit; request the limit explicitly")]
    BetaDegenerate,

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
