//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by construction, validation, propagation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A structural predicate (Hermiticity, unitarity, idempotency,
    /// orthonormality, trace) failed.
    #[error("{what}: deviation {magnitude:.3e} exceeds tolerance {tolerance:.1e}")]
    Structural {
        what: &'static str,
        magnitude: f64,
        tolerance: f64,
    },

    /// Input matrix is (numerically) rank deficient.
    #[error("rank-deficient input: smallest singular value {smallest_singular_value:.3e}")]
    Degenerate { smallest_singular_value: f64 },

    /// A zero-speed or otherwise degenerate evolution was supplied where a
    /// strictly positive quantity is required.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Time grids are missing, too short, or incompatible with each other.
    #[error("grid error: {0}")]
    Grid(String),

    /// Consecutive projector samples are too far apart to be transported.
    #[error("under-resolved path: |P[{index}+1] - P[{index}]| = {jump:.3e} >= 0.5")]
    UnderResolved { index: usize, jump: f64 },

    /// A supposed tangent vector violates `V^dag X + X^dag V = 0`.
    #[error("vector is not tangent to the Stiefel manifold: asymmetry {0:.3e}")]
    NotTangent(f64),

    /// The initial frame does not span the initial subspace.
    #[error("initial frame does not span the initial subspace: deviation {0:.3e}")]
    SpanMismatch(f64),

    /// A loop was required but the subspace path does not close.
    #[error("open loop: closure defect {defect:.3e} exceeds {tolerance:.1e}")]
    OpenLoop { defect: f64, tolerance: f64 },

    /// The computational space is too large for the ambient space.
    #[error("codimension too small: ambient dimension {dim} < 2 x {n}")]
    Codimension { dim: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A verification clause failed.
    #[error("verification failed ({clause}): {detail}")]
    Verification { clause: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
