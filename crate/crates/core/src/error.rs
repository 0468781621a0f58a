use thiserror::Error;

/// Errors raised by the counting, series and asymptotics routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ell = {ell} divides q = {q}")]
    EllDividesQ { q: u64, ell: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("variable scale mismatch: {left} vs {right}")]
    ScaleMismatch { left: u32, right: u32 },
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("census depth {have} is below the required degree {need}")]
    CensusTooShallow { have: u32, need: u32 },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("cutoff {cutoff} cannot certify the requested precision: {detail}")]
    CutoffTooSmall { cutoff: u32, detail: String },
    #[error("non-integral count at n = {n}")]
    NonIntegral { n: usize },
    #[error("expected a positive constant, got {0}")]
    NonPositive(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
