use thiserror::Error;

/// Errors reported by the library. Numeric payloads are converted to `f64`
/// so the type does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnakeError {
    #[error("invalid Schur parameter at index {index}: |alpha| = {modulus} is not < 1")]
    InvalidSchurParameter { index: usize, modulus: f64 },

    #[error("invalid generating-sequence bit at index {index}: {value} is not 0 or 1")]
    InvalidBit { index: usize, value: i64 },

    #[error("invalid monomial order at index {index}: {reason}")]
    InvalidMonomialOrder { index: usize, reason: String },

    #[error("length mismatch: {what} needs {needed}, got {available}")]
    LengthMismatch {
        what: &'static str,
        needed: usize,
        available: usize,
    },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("evaluation at z = 0 is undefined for Laurent polynomials with negative powers")]
    ZeroArgument,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("moment integration did not converge after refining to {points} grid points (last change {change:e})")]
    NonConvergentGrid { points: usize, change: f64 },

    #[error("exponent {exponent} exceeds moment table range +/-{jmax}")]
    InsufficientMoments { exponent: i64, jmax: usize },

    #[error("Toeplitz moment matrix is not positive definite at order {order}")]
    NotPositiveDefinite { order: usize },

    #[error("Gram-Schmidt breakdown at basis element {index} (residual norm^2 {residual:e})")]
    SingularGram { index: usize, residual: f64 },

    #[error("matrix is not unitary: max |M M^H - I| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("eigenvalue iteration did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },
}

pub type Result<T> = std::result::Result<T, SnakeError>;
