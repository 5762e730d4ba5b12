use thiserror::Error;

/// Errors raised by ring construction, arithmetic, and the verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("elements belong to different rings")]
    OwnerMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("{what}: size {size} exceeds the enumeration cap {cap}")]
    Resource { what: String, size: u64, cap: u64 },
    #[error("internal structure error: {0}")]
    Structure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("invalid eigenvector: {0}")]
    InvalidEigenvector(String),
    #[error("cannot parse ring spec {0:?}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
