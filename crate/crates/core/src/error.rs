use thiserror::Error;

/// Errors raised by lattice, calculus, probability and stopping-time operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("space mismatch: {left} atoms vs {right} atoms")]
    SpaceMismatch { left: usize, right: usize },

    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("a stone space needs at least one atom")]
    EmptySpace,

    #[error("atom {atom} is out of range for a space with {atoms} atoms")]
    AtomOutOfRange { atom: usize, atoms: usize },

    #[error("NaN is not an extended real (atom {atom})")]
    NotANumber { atom: usize },

    #[error("undefined arithmetic: infinity minus infinity at atom {atom}")]
    UndefinedArithmetic { atom: usize },

    #[error("element is not finite at atom {atom}")]
    NotFinite { atom: usize },

    #[error("element is not in the sup-completion: -inf at atom {atom}")]
    NotSupCompletion { atom: usize },

    #[error("element is not positive at atom {atom}")]
    NotPositive { atom: usize },

    #[error("empty family")]
    EmptyFamily,

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("sequence is not monotone: {0}")]
    NotMonotone(String),

    #[error("invalid support [{a}, {b}]")]
    InvalidSupport { a: f64, b: f64 },

    #[error("callback failure: {0}")]
    CallbackFailure(String),

    #[error("missing uniform continuity data for {0}")]
    MissingContinuityData(String),

    #[error("arity mismatch: function takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("filtration error: {0}")]
    InvalidFiltration(String),

    #[error("filtration mismatch")]
    FiltrationMismatch,

    #[error("process is not adapted at time {time}")]
    NotAdapted { time: usize },

    #[error("process is not a martingale (component {component})")]
    NotMartingale { component: usize },

    #[error("minorant {index} exceeds the function at {point:?}")]
    MinorantViolation { index: usize, point: Vec<f64> },

    #[error("not increasing: {0}")]
    NotIncreasing(String),

    #[error("band projections do not commute with the filtration: {0}")]
    CommutationFailure(String),

    #[error("invalid stopping time: {0}")]
    InvalidStoppingTime(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("stopping time is unbounded for a process of length {horizon} (atom {atom})")]
    Unbounded { atom: usize, horizon: usize },

    #[error("not an increasing indicator process: {0}")]
    NotIndicatorProcess(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
