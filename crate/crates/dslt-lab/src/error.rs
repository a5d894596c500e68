use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Cholesky fallback would exceed the configured memory cap.
    #[error("grid too large: {steps} steps needs {needed} bytes for the Cholesky fallback (cap {cap})")]
    GridTooLarge { steps: usize, needed: u64, cap: u64 },

    /// A covariance triple produced a non-positive determinant at eps > 0.
    #[error("degenerate geometry: det(eps I + Sigma) = {det} <= 0 for eps = {eps}")]
    DegenerateGeometry { eps: f64, det: f64 },

    /// Quadrature did not reach the requested tolerance within max_level.
    #[error("quadrature did not converge: value {value}, error estimate {error_estimate}")]
    NotConverged { value: f64, error_estimate: f64 },

    /// The integrand returned NaN or infinity at an interior node.
    #[error("non-finite integrand evaluation at {point:?}")]
    NonFiniteEvaluation { point: Vec<f64> },

    /// Parameters fall outside the regime an operation is defined for.
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// Exact combinatorics would exceed the configured precision budget.
    #[error("combinatorial overflow: m*d = {0} exceeds the exact-arithmetic bound")]
    Overflow(usize),

    /// The kernel bandwidth cannot resolve the grid's displacement scale.
    #[error("resolution violation: dt^(2H)/eps = {ratio} exceeds guard {guard}")]
    ResolutionViolation { ratio: f64, guard: f64 },

    /// A sampled path contains NaN or infinite values.
    #[error("non-finite path value at grid index {index}")]
    NonFinitePath { index: usize },

    /// Fewer samples than a statistic needs.
    #[error("too few samples: {got} < {need}")]
    TooFewSamples { got: usize, need: usize },

    /// Configuration file failed validation; all problems are listed.
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    ConfigInvalid(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code per the CLI contract: 1 validation, 2 numerical
    /// non-convergence, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. } | Error::NonFiniteEvaluation { .. } => 2,
            Error::Io(_) | Error::Json(_) => 3,
            _ => 1,
        }
    }
}
