use thiserror::Error;

/// Errors raised by the numerical and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: vector norm {norm} is not within 1e-9 of 1")]
    Norm { line: usize, norm: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("symmetric tridiagonal eigen-solve did not converge")]
    EigenSolve,

    #[error("tail majorant check failed: {0}")]
    TailUnsound(String),

    #[error("quadrature not resolved: {0}")]
    Quadrature(String),

    #[error("signed weights are not allowed here (weight {index} = {value})")]
    SignedWeights { index: usize, value: f64 },

    #[error("no node-free cap in the packing")]
    NoFreeCap,

    #[error("coefficient decay insufficient: remainder {remainder:e} exceeds {limit:e}")]
    InsufficientDecay { remainder: f64, limit: f64 },

    #[error("coincident points {i} and {j}")]
    Singularity { i: usize, j: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("heat-kernel remainder target unreachable: {0}")]
    HeatRemainder(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
