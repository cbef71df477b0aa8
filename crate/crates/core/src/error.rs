use thiserror::Error;

use crate::scalar::ParseScalarError;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or invalid input data.
    Input,
    /// Total conflict or a conditioning event that leaves nothing to condition.
    Conflict,
    /// A computation would exceed a resource budget.
    Budget,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("frame must contain at least one label")]
    EmptyFrame,
    #[error("frame labels must be nonempty")]
    EmptyLabel,
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("frame has {size} labels, at most {max} are supported")]
    FrameTooLarge { size: usize, max: usize },
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("subset mask {mask:#b} does not fit a frame of size {size}")]
    MaskOutOfFrame { mask: u32, size: usize },
    #[error("operands are defined on different frames")]
    FrameMismatch,

    #[error("negative mass {value} on {set}")]
    NegativeMass { set: String, value: String },
    #[error("masses sum to {sum}, expected 1")]
    MassSumNotOne { sum: String },
    #[error("mass {value} on the empty set is not allowed in closed-world mode")]
    MassOnEmptySet { value: String },
    #[error("table is not a belief function: Möbius inversion gives mass {mass} on {set}")]
    NotBeliefFunction { set: String, mass: String },
    #[error("invalid belief table: {0}")]
    InvalidBeliefTable(String),

    #[error("negative probability {value} for {label}")]
    NegativeProbability { label: String, value: String },
    #[error("probabilities sum to {sum}, expected 1")]
    ProbabilitySumNotOne { sum: String },
    #[error("the selected sources have total probability 0")]
    ZeroProbability,

    #[error("cannot condition on the empty set")]
    EmptyConditioningSet,
    #[error("conditioning event {set} has plausibility 0")]
    ZeroPlausibility { set: String },
    #[error("total conflict: no mass survives normalization")]
    TotalConflict,
    #[error("conditioning on {set} is undefined: every compatible distribution gives it probability 0")]
    UndefinedConditioning { set: String },

    #[error("credal enumeration needs an allocation for m(∅) = {value}, which has none")]
    OpenWorldMass { value: String },
    #[error("{what}: {required} exceeds the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("source {0} has no options")]
    EmptyOptionSet(String),
    #[error("unknown world {0}")]
    UnknownWorld(String),
    #[error("unknown source {0}")]
    UnknownSource(String),
    #[error("duplicate source {0}")]
    DuplicateSource(String),
    #[error("no world survives the revision")]
    AllWorldsDead,

    #[error("invalid set expression {0:?}: expected a braced, comma-separated label list")]
    SetExpression(String),
    #[error("{field}: {source}")]
    Literal {
        field: String,
        #[source]
        source: ParseScalarError,
    },
    #[error("invalid document: {0}")]
    Document(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyConditioningSet
            | Error::ZeroPlausibility { .. }
            | Error::TotalConflict
            | Error::UndefinedConditioning { .. }
            | Error::AllWorldsDead => ErrorKind::Conflict,
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
