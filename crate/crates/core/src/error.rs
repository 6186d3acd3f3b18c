//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two fields (or a field and an operator) were built on different grids.
    #[error("grid mismatch: expected {expected:?}, got {got:?}")]
    GridMismatch { expected: [usize; 3], got: [usize; 3] },

    /// Grid sizes must be even and at least 8 per axis.
    #[error("invalid grid sizes {0:?}: each axis must be even and >= 8")]
    InvalidGrid([usize; 3]),

    /// Lebesgue exponents must satisfy p >= 1 (or be infinite).
    #[error("invalid Lebesgue exponent: {0}")]
    InvalidExponent(String),

    /// Misuse of an operation (bad axis, mode outside the grid, ...).
    #[error("{0}")]
    InvalidArgument(String),

    /// Requested time step violates the advective stability bound.
    #[error("time step {dt:e} exceeds the advective CFL bound {max_dt:e}")]
    Cfl { dt: f64, max_dt: f64 },

    /// A non-finite value appeared while stepping.
    #[error("non-finite value at t = {t}: {context}")]
    NonFinite { context: String, t: f64 },

    /// Malformed snapshot file.
    #[error("snapshot format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
