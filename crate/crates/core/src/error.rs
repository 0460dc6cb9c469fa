use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("depth limit exceeded: requested {requested}, maximum {max}")]
    DepthLimitExceeded { requested: usize, max: usize },

    #[error("enumeration too large: {count} formulas exceeds limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("quantum connective in classical evaluation: {0}")]
    QuantumNodeInClassicalEval(String),

    #[error("object {object} out of range for state {state} (universe {universe})")]
    ObjectOutOfRange {
        state: String,
        object: usize,
        universe: usize,
    },

    #[error("unknown predicate {0}")]
    UnknownPredicate(String),

    #[error("unknown state {0}")]
    UnknownState(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid quantum spec: {0}")]
    InvalidSpec(String),

    #[error("invalid scalar literal {0:?}")]
    InvalidScalar(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("closure overflow: more than {cap} subspaces generated by [{generators}]")]
    ClosureOverflow { cap: usize, generators: String },

    #[error("zero vector{}", .0.as_ref().map(|s| format!(" for {s}")).unwrap_or_default())]
    ZeroVector(Option<String>),

    #[error("universe size {universe} too small for indeterminate property {predicate} in state {state}")]
    UniverseTooSmall {
        universe: usize,
        predicate: String,
        state: String,
    },

    #[error("not p-testable: {0}")]
    NotTestable(String),

    #[error("quantum connective under a classical connective: {0}")]
    QuantumUnderClassical(String),

    #[error("model has no Hilbert-space provenance (missing theta)")]
    MissingTheta,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
