use snake_core::SnakeError;
use thiserror::Error;

/// Failure classes with stable process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// A verification suite or exactness check failed (exit 1).
    #[error("{0}")]
    Verification(String),
    /// Bad flags, config, shape, Schur parameters or I/O target (exit 2).
    #[error("{0}")]
    Validation(String),
    /// A numerical routine did not converge or broke down (exit 3).
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<SnakeError> for CliError {
    fn from(e: SnakeError) -> Self {
        use SnakeError::*;
        match e {
            InvalidSchurParameter { .. }
            | InvalidBit { .. }
            | InvalidMonomialOrder { .. }
            | LengthMismatch { .. }
            | IndexOutOfRange { .. }
            | InvalidSize(_)
            | ZeroArgument
            | InvalidMeasure(_)
            | InsufficientMoments { .. } => CliError::Validation(e.to_string()),
            NonConvergentGrid { .. }
            | NotPositiveDefinite { .. }
            | SingularGram { .. }
            | NotUnitary { .. }
            | NoConvergence { .. } => CliError::Numerical(e.to_string()),
        }
    }
}
