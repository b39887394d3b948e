use thiserror::Error;

use crate::bd::Diagnostic;
use crate::surd::SurdError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bidiagonal decomposition: {}", join(.0))]
    Validation(Vec<Diagnostic>),
    #[error("row exchange required in column {column} (row {row})")]
    RowExchangeRequired { column: usize, row: usize },
    #[error("singular matrix: zero pivot at position {index}")]
    Singular { index: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("upper multipliers must all be zero for column scaling")]
    NotLowerTriangular,
    #[error("zero diagonal scaling factor at position {index}")]
    SingularDiagonal { index: usize },
    #[error("singular family: {0}")]
    SingularFamily(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("non-finite value at ({row}, {col})")]
    Saturated { row: usize, col: usize },
    #[error("no convergence up to {max_precision} bits: {detail}")]
    NoConvergence { max_precision: usize, detail: String },
    #[error("mode not supported: {0}")]
    UnsupportedMode(String),
    #[error("spectrum is not real: {0}")]
    NonRealSpectrum(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("plot error: {0}")]
    Plot(String),
}

impl Error {
    /// True for errors that indicate invalid input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation(_)
                | Error::NotLowerTriangular
                | Error::SingularDiagonal { .. }
                | Error::SingularFamily(_)
                | Error::Parse(_)
                | Error::Config(_)
                | Error::ShapeMismatch(_)
                | Error::DimensionMismatch { .. }
                | Error::NotSquare { .. }
        )
    }
}

fn join(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
