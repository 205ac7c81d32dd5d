use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices are defined over different fields")]
    FieldMismatch,
    #[error("{0} is not a prime below 2^32")]
    InvalidPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed monad file at {location}: {message}")]
    Malformed { location: String, message: String },
    #[error("unknown example {0:?} (expected torsion-free, reflexive or locally-free)")]
    UnknownExample(String),
    #[error("sheaf is not known to be locally free (classified as {0})")]
    NotLocallyFree(String),
    #[error("no special monad with dimensions (v, w, v') = ({0}, {1}, {2}) exists")]
    NotRepresentable(usize, usize, usize),
    #[error("no valid monad found after {0} draws")]
    RetryExhausted(usize),
    #[error("the zero vector is not a point of projective space")]
    ZeroPoint,
    #[error("line parametrization has rank {0}, expected 2")]
    DegenerateLine(usize),
    #[error("alpha drops rank on the line (gcd of maximal minors: {0})")]
    AlphaDegenerate(String),
    #[error("splitting reconstruction failed: {0}")]
    InconsistentReconstruction(String),
    #[error("internal consistency check failed: {0}")]
    EngineInvariant(String),
    #[error("twist window [{0}, {1}] does not cover [-6, 2]")]
    WindowTooSmall(i64, i64),
    #[error("{0} cannot be reduced modulo {1}")]
    Reduction(String, u64),
    #[error("requested {0} samples, the cap is {1}")]
    SampleCap(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
