use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one (got {trace})")]
    BadTrace { trace: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigendecomposition failed to reconstruct input (residual {residual:.3e})")]
    ConvergenceFailure { residual: f64 },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("solver did not reach tolerance (gap {gap:.3e} after {iterations} iterations)")]
    SolverFailure { gap: f64, iterations: usize },

    #[error("set is already perfectly antidistinguishable")]
    NotNeeded,

    #[error("search exhausted without an antidistinguishable extension (best value {best_value})")]
    SearchExhausted { best_value: f64 },

    #[error("unsupported dimension {0}")]
    BadDimension(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
