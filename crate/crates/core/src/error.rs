use thiserror::Error;

/// Errors raised by the geometry, solver and experiment routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} breaks strict convexity")]
    NonConvex(usize),
    #[error("vertex {0} repeats its predecessor")]
    RepeatedVertex(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("origin is not strictly interior")]
    OriginNotInterior,
    #[error("direction must be non-zero")]
    ZeroDirection,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("point is not strictly interior")]
    PointNotInterior,
    #[error("solver did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("invalid dimension {0}")]
    InvalidDimension(i64),
    #[error("body is not o-symmetric")]
    NotSymmetric,
    #[error("body is degenerate")]
    DegenerateBody,
    #[error("no contact points between body and ellipse")]
    NoContacts,
    #[error("area {area} outside admissible interval ({lo}, {hi})")]
    AreaOutOfRange { area: f64, lo: f64, hi: f64 },
    #[error("bisection failed: {0}")]
    BisectionFailure(String),
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("no Behrend square or hexagon contact pattern")]
    BehrendPatternMissing,
    #[error("move destroys convexity")]
    ConvexityLost,
    #[error("need at least {need} records with distinct eps, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error("deficit must be positive (eps = {0})")]
    NonPositiveDeficit(f64),
    #[error("sandwich cannot be satisfied: {0}")]
    SandwichUnsatisfiable(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
