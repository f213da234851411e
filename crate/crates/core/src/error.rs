use thiserror::Error;

/// Errors raised by the numerical core and the experiment harness.
#[derive(Debug, Error)]
pub enum CatError {
    #[error("matrix is not Hermitian: max |m - m†| = {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("eigenvalue {value:e} is below the clamp window")]
    NegativeEigenvalue { value: f64 },

    #[error("grid resolution {grid} is coarser than the {cells} partition cells")]
    ResolutionTooCoarse { grid: usize, cells: usize },

    #[error("symbol {symbol} is out of range for an alphabet of {alphabet} letters")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        limit: u64,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("eigendecomposition did not converge")]
    NoConvergence,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CatError> = std::result::Result<T, E>;
