use thiserror::Error;

/// Errors raised by the linear algebra, bias-trick and search routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid data matrix: {0}")]
    InvalidData(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("at least one component must be requested")]
    ZeroRank,

    #[error("requested {requested} components but only {available} are available")]
    RankRequestTooLarge { requested: usize, available: usize },

    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(f64),

    #[error("bias must be finite and non-negative, got {0}")]
    InvalidBias(f64),

    #[error("leading direction is undefined when both the bias and the mean are zero")]
    DegenerateDirection,

    #[error("exhaustive search needs {subsets} subsets, above the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },

    #[error("invalid robust PCA problem: {0}")]
    InvalidProblem(String),

    #[error("malformed baseline file at line {line}: {reason}")]
    MalformedBaselineFile { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
