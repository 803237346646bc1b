use thiserror::Error;

/// Errors raised by the invariant, resolution and bound computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("weight vector must be nonempty with all weights >= 1")]
    InvalidWeights,
    #[error("hypersurface needs at least 3 weights and a positive degree")]
    InvalidHypersurface,
    #[error("not of general type: amplitude {0} <= 0")]
    NonGeneralType(i64),
    #[error("no canonical sections (p_g = 0)")]
    NoSections,
    #[error("invalid fraction {p}/{q}: need 0 < q < p and gcd(p, q) = 1")]
    InvalidFraction { p: i64, q: i64 },
    #[error("expected a surface singularity, got {0} local weights")]
    NotSurfaceType(usize),
    #[error("singularity 1/{r}({weights:?}) is not isolated")]
    NotIsolated { r: u64, weights: Vec<u64> },
    #[error("curve configuration is not negative definite")]
    NotContractible,
    #[error("invalid curve configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension n = {0} out of range")]
    InvalidDimension(i64),
    #[error("precondition of the step at m = {m} is not certified: (m-1-sigma) xi = {alpha} <= 1")]
    PreconditionNotCertified { m: u64, alpha: String },
    #[error("catalog error: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
