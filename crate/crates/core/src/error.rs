use thiserror::Error;

/// Errors raised by validation and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("decomposition length {length} is smaller than rank {rank}")]
    RankTooHigh { length: usize, rank: usize },
    #[error("squared substate concurrence sum {sum} exceeds 1")]
    DomainError { sum: f64 },
    #[error("unsupported dimensions {n}x{k}: {reason}")]
    UnsupportedDims {
        n: usize,
        k: usize,
        reason: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
