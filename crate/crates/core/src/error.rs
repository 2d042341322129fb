use thiserror::Error;

/// Errors surfaced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate metric at node {node}: {what}")]
    DegenerateMetric { node: usize, what: String },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("inconsistent truncation: {0}")]
    InconsistentTruncation(String),

    #[error("NaN encountered at node {node} in {context}")]
    NanField { node: usize, context: String },

    #[error("closeness hypothesis violated: {0}")]
    ClosenessViolation(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("ill-conditioned system: {what} (smallest Ritz value ≈ {ritz:.3e})")]
    IllConditioned { what: String, ritz: f64 },

    #[error("eigensolve failed: {0}")]
    EigenFailure(String),

    #[error("no well-defined mass aspect: fit residual {residual:.3e} exceeds {threshold:.3e}")]
    NoWellDefinedMass { residual: f64, threshold: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("overlap violation: {0}")]
    OverlapViolation(String),

    #[error("assembly refused: {0}")]
    AssemblyRefusal(String),

    #[error("regression gate failure: {0}")]
    RegressionGate(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code contract: 1 config, 2 nonconvergence, 3 regression gate.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InconsistentTruncation(_) | Error::GridTooCoarse(_) => 1,
            Error::NonConvergence(_) | Error::ClosenessViolation(_) | Error::IllConditioned { .. } => 2,
            Error::RegressionGate(_) => 3,
            _ => 1,
        }
    }
}
