use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a usable prime modulus")]
    InvalidPrime(u64),
    #[error("bad scalar `{0}`")]
    Scalar(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("not a coboundary")]
    NotCoboundary,
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("validation error: axiom {axiom} fails on ({tuple})")]
    Validation { axiom: String, tuple: String },
    #[error("component on ({tuple}) has degree {found}, expected {expected}")]
    DegreeViolation {
        tuple: String,
        expected: i32,
        found: i32,
    },
    #[error("source/target mismatch: {0}")]
    SourceTargetMismatch(String),
    #[error("not well defined on cohomology: {0}")]
    NotWellDefined(String),
    #[error("transformation is not closed: {0}")]
    NotClosed(String),
    #[error("not a linear category: {0}")]
    NotLinear(String),
    #[error("invalid A-infinity functor {name}: {detail}")]
    FunctorInvalid { name: String, detail: String },
    #[error("vanishing hypothesis fails: H^{degree}{context} has dimension {dimension}")]
    VanishingHypothesisFails {
        degree: i32,
        dimension: usize,
        context: String,
    },
    #[error("H0 family is not natural: {0}")]
    NaturalityFails(String),
    #[error("partial functor data is invalid: {0}")]
    PartialDataInvalid(String),
    #[error("internal invariant violated: obstruction nonzero on ({tuple}): {detail}")]
    InternalObstructionNonzero { tuple: String, detail: String },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that can only arise from a bug, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalObstructionNonzero { .. } | Error::NotCocycle(_)
        )
    }
}
