use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2 < p < 2^31")]
    InvalidPrime(u32),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("zero polynomial has no multidegree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("degree {0:?} is not attainable in this grading")]
    UnattainableDegree(Vec<i64>),
    #[error("exponent overflow (exponents are limited to 127)")]
    ExponentOverflow,
    #[error("quotient by the zero ideal")]
    ZeroIdeal,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected a curve (projective dimension 1), found dimension {0}")]
    WrongDimension(i64),
    #[error("Hilbert function did not stabilize up to degree {0}")]
    NoStabilization(i64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("degenerate construction: {0}")]
    Degenerate(String),
    #[error("curves share a component (intersection has dimension {0})")]
    CommonComponent(i64),
    #[error("form {0} does not lie in the ideal")]
    FormNotInIdeal(usize),
    #[error("forms do not cut out a complete intersection of codimension {expected} (found {found})")]
    NotCompleteIntersection { expected: i64, found: i64 },
    #[error("residual is empty: the curve is the whole complete intersection")]
    EmptyResidual,
    #[error("negative predicted degree: curve not linkable by this complete intersection")]
    NotLinkable,
    #[error("linear system too small: need {needed} independent forms, found {found}")]
    SystemTooSmall { needed: usize, found: usize },
    #[error("numerical precondition violated: {0}")]
    Precondition(String),
    #[error("resolution did not terminate within length cap {0}")]
    ResolutionCap(usize),
    #[error("unexpected module structure: {0}")]
    UnexpectedShape(String),
    #[error("resampling exhausted after {0} attempts: {1}")]
    ResampleExhausted(usize, String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing fixture: {0}")]
    MissingFixture(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
