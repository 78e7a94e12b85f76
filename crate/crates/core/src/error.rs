//! Error type shared by every module in the crate.

use crate::hypgeo::Model;

/// Errors produced by geometry, density, bound and simulation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violated a precondition (non-finite, out of domain, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two points (or a point and a distribution) live in different models.
    #[error("model mismatch: expected {expected:?}, found {found:?}")]
    ModelMismatch { expected: Model, found: Model },

    /// Two points (or a point and a constellation) have different dimensions.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An isometry pushed a point onto or past the model boundary.
    #[error("point degenerated onto the model boundary: {0}")]
    BoundaryDegeneracy(String),

    /// Adaptive quadrature ran out of subdivisions; carries the best estimate.
    #[error("quadrature did not converge: estimate {estimate}, error ~{error_estimate}")]
    ConvergenceFailure { estimate: f64, error_estimate: f64 },

    /// The rejection sampler exhausted its iteration budget.
    #[error("rejection sampler gave up after {attempts} attempts")]
    SamplingFailure { attempts: u64 },

    /// A bound in Neighbors mode was requested without neighbor lists.
    #[error("neighbor lists are required but absent")]
    MissingNeighbors,

    /// Exact Voronoi neighbors are only computed in the plane.
    #[error(
        "exact Voronoi neighbors unsupported in dimension {dimension}; \
         supply neighbor lists or use the all-pairs bound"
    )]
    UnsupportedExactNeighbors { dimension: usize },

    /// The requested bound does not apply to the constellation's space.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// A constellation violated its invariants (duplicates, bad lists, ...).
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),

    /// A constellation file could not be read, written or parsed.
    #[error("constellation io: {0}")]
    ConstellationIo(String),

    /// Worker pool construction failed.
    #[error("concurrency setup failed: {0}")]
    Concurrency(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
