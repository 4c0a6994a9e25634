use thiserror::Error;

/// Structural problems found while building a [`FaultTree`](crate::FaultTree).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid identifier `{0}`")]
    InvalidId(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("`{node}` references unknown node `{reference}`")]
    UnknownReference { node: String, reference: String },
    #[error("gate `{0}` is part of a cycle")]
    Cycle(String),
    #[error("gate `{gate}`: {reason}")]
    BadArity { gate: String, reason: String },
}

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid lifetime parameter: {0}")]
    InvalidParameter(String),
    #[error("mission time must be finite, got {0}")]
    InvalidTime(f64),
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("state has no value for event `{0}`")]
    IncompleteState(String),
    #[error("no probability assigned to event `{0}`")]
    MissingEvent(String),
    #[error("tree is not coherent: gate `{0}` is not an AND/OR gate")]
    NonCoherent(String),
    #[error("cut-set expansion exceeded the limit of {limit} intermediate sets")]
    CutSetExplosion { limit: usize },
    #[error("{count} minimal cut sets exceed the inclusion-exclusion limit of {limit}")]
    TooManyCutSets { count: usize, limit: usize },
    #[error("{count} basic events exceed the enumeration limit of {limit}")]
    EnumTooLarge { count: usize, limit: usize },
    #[error("inclusion-exclusion needs at least one cut set")]
    EmptyCutSets,
    #[error("inclusion-exclusion sum {0} drifted outside [0, 1]")]
    SumOutOfBounds(f64),
    #[error("sample count must be at least 1")]
    NoSamples,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
