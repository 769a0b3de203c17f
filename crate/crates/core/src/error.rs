use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in Q(sqrt3)")]
    DivisionByZero,
    #[error("cannot parse {0:?} as p/q+r/s*sqrt3")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("cannot differentiate a series of order 0")]
    OrderTooLow,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("series order must be even and at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("singular linear system at order {order}")]
    Singular { order: usize },
    #[error("linear system at order {order} is not affine in the unknown pair")]
    Nonlinear { order: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point coincides with the focus (0, 1)")]
    DegenerateFocus,
    #[error("tangent vector has zero length")]
    ZeroTangent,
    #[error("need at least 2 samples on a nondegenerate domain")]
    BadDomain,
    #[error("truncated series is untrusted at t = {t}")]
    SeriesUntrusted { t: f64 },
    #[error("curve refinement exceeded {0} samples")]
    TooManySamples(usize),
    #[error("iteration count must be at least 1")]
    NoIterations,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("series order {have} too small: need at least {need}")]
    OrderTooSmall { have: usize, need: usize },
    #[error("arc is not regular at t = {t}")]
    NonRegular { t: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
