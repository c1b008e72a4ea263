use std::path::PathBuf;

use thiserror::Error;

/// Everything the library can fail with.
///
/// Variants split into two families that the command line maps onto
/// different exit codes: input problems (bad parameters, malformed files,
/// IO) and numerical failures (singular systems, unconverged quadrature,
/// unstable time steps).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("duplicate sample point at rows {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("spectrum is not hermitian: imaginary part {imag:e} exceeds tolerance {tol:e}")]
    NonHermitian { imag: f64, tol: f64 },

    #[error("dense path refused: {size} grid frequencies exceed the limit of {limit}; use the dual path")]
    DenseGuard { size: usize, limit: usize },

    #[error("{factorization} factorization failed: {reason}")]
    Singular {
        factorization: &'static str,
        reason: String,
    },

    #[error(
        "kernel matrix is not strictly diagonally dominant (row {row}: off-diagonal sum {off_diagonal:e}); \
         sigma = {sigma}, minimum pairwise distance = {min_distance}"
    )]
    NotDiagonallyDominant {
        row: usize,
        off_diagonal: f64,
        sigma: f64,
        min_distance: f64,
    },

    #[error("quadrature did not converge: estimated error {estimate:e} after {intervals} intervals")]
    Quadrature { estimate: f64, intervals: usize },

    #[error("frequency band {band} too small for sigma = {sigma}; need at least {required}")]
    BandTooSmall {
        band: f64,
        sigma: f64,
        required: f64,
    },

    #[error("limit classification withheld: {0}")]
    InconsistentEvidence(String),

    #[error("no probe points remain outside the exclusion radius {radius}")]
    EmptyProbeSet { radius: f64 },

    #[error("half-maximum level never crossed within radius {radius} along axis {axis}")]
    HalfLevelNotCrossed { axis: usize, radius: f64 },

    #[error("unstable time step: dt = {dt} exceeds the admissible maximum {max_dt:e}")]
    UnstableStep { dt: f64, max_dt: f64 },

    #[error("dynamics not converged: max residual {residual:e} above {target:e} after {steps} steps")]
    NotConverged {
        residual: f64,
        target: f64,
        steps: usize,
    },

    #[error("{path}: line {line}: {message}")]
    Csv {
        path: String,
        line: u64,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonHermitian { .. }
                | Error::Singular { .. }
                | Error::NotDiagonallyDominant { .. }
                | Error::Quadrature { .. }
                | Error::InconsistentEvidence(_)
                | Error::EmptyProbeSet { .. }
                | Error::HalfLevelNotCrossed { .. }
                | Error::UnstableStep { .. }
                | Error::NotConverged { .. }
                | Error::DenseGuard { .. }
                | Error::BandTooSmall { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
