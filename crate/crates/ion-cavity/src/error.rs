//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, propagation, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state vector is not normalized: |norm^2 - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("index out of range: {0}")]
    InvalidIndex(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cavity in the vacuum state: no W-state generation takes place")]
    PhotonVacuum,

    #[error("Fock truncation yields dimension {dim}, above the {limit} guard")]
    TruncationTooLarge { dim: usize, limit: usize },

    #[error("population {leakage:.3e} on the truncation boundary exceeds {limit:.1e}")]
    TruncationLeakage { leakage: f64, limit: f64 },

    #[error("norm {residual:.3e} outside the four-state chain exceeds {limit:.1e}")]
    ChainResidual { residual: f64, limit: f64 },

    #[error("unknown figure {0}: recipes cover figures 1 through 7")]
    UnknownFigure(u8),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
