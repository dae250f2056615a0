use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least {min}, found {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("hyperplane normal is zero")]
    ZeroNormal,

    #[error("the origin has no polar hyperplane")]
    OriginHasNoPolar,

    #[error("halfspace set mixes origin-side and far-side halfspaces")]
    MixedOrientation,

    #[error("the origin lies on the boundary of the set")]
    OriginOnBoundary,

    #[error("the halfspace intersection is empty")]
    EmptyIntersection,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("convex hull is degenerate (affine dimension {affine_dim} < {dim})")]
    DegenerateHull { affine_dim: usize, dim: usize },

    #[error("query point is not in the convex hull")]
    NotInHull,

    #[error("the two sets intersect")]
    Intersecting,

    #[error("{what} exceeds the supported scale ({limit})")]
    ScaleExceeded { what: String, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("main loop exhausted after {iterations} iterations: {log}")]
    LoopExhausted { iterations: usize, log: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("float-mode numeric failure: {0}")]
    NumericFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
