use thiserror::Error;

/// Errors raised by the gate algebra, the catalog and the lattice model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("state vector is not normalized: |norm - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown parameter id `{0}` (expected one of jt, gamma, omega1, theta1, phi1, omega2, theta2, phi2)")]
    UnknownParameter(String),
    #[error("no analytic condition family for {gate} at n = {n}, p = {p}")]
    Unrealizable { gate: String, n: i64, p: i64 },
    #[error("coupling sign {sign} is incompatible with {statistics} statistics")]
    SignMismatch { sign: &'static str, statistics: &'static str },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
