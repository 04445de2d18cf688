//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("sparsity k = {k} outside [1, {p}]")]
    BadSparsity { k: usize, p: usize },
    #[error("tolerance must be nonnegative, got {0}")]
    NegativeTolerance(f64),
    #[error("eigendecomposition failed to converge")]
    ConvergenceFailure,
    #[error("support set is empty")]
    EmptySupport,
    #[error("no nonzero entry on the allowed index set")]
    DegenerateInput,
    #[error("active node set is empty")]
    EmptyActiveSet,
    #[error("no free index to branch on")]
    NoFreeIndex,
    #[error("slice {0} is empty")]
    EmptySlice(usize),
    #[error("need n > p, got n = {n}, p = {p}")]
    TooFewSamples { n: usize, p: usize },
    #[error("response feature matrix is rank deficient after centering")]
    RankDeficientFeatures,
    #[error("sample covariance is singular")]
    SingularCovariance,
    #[error("deflation direction is zero")]
    ZeroVector,
    #[error("basis matrix has a zero column")]
    ZeroBasis,
    #[error("bad model spec: {0}")]
    BadSpec(String),
    #[error("enumeration too large: C({p}, {k}) exceeds the 10^6 guard")]
    TooLarge { p: usize, k: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
