use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("dimension {0} is not supported by this routine")]
    DimensionUnsupported(usize),

    #[error("kronecker product dimension {0} exceeds 81")]
    DimensionOverflow(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("not a valid state: {0}")]
    NotAState(String),

    #[error("Bloch coefficient pairing violated (deviation {deviation:e})")]
    PairingViolation { deviation: f64 },

    #[error("parameters do not describe a physical state")]
    NotPhysical,

    #[error("weight vector norm {norm} lies outside the unit sphere")]
    OutsideSphere { norm: f64 },

    #[error("section selector {0} is not in 1..=4")]
    BadSelector(usize),

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("Bures density is singular or undefined here: {0}")]
    DegenerateBures(String),

    #[error("density prefactor is singular at the origin")]
    OriginSingularity,

    #[error("invalid parameters: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
