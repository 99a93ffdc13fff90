use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed token at position {pos}: {text:?}")]
    MalformedToken { pos: usize, text: String },
    #[error("label {label:?} must occur exactly once as O and once as U")]
    LabelCountMismatch { label: String },
    #[error("label {label:?} carries different signs at its two occurrences")]
    SignMismatch { label: String },
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("edge {edge:?} references a missing socket")]
    DanglingHalfEdge { edge: String },
    #[error("half-edge {half_edge} is used by two edges")]
    DuplicateSocket { half_edge: String },
    #[error("declared orientation of edge {edge:?} is inconsistent with crossing signs")]
    OrientationMismatch { edge: String },
    #[error("unknown crossing {0:?}")]
    UnknownCrossing(String),
    #[error("move pattern not found at the requested site")]
    PatternNotFound,
    #[error("state has {got} bits but the diagram has {expected} crossings")]
    StateLengthMismatch { got: usize, expected: usize },
    #[error("state enumeration needs {needed} states, budget allows {budget}")]
    ResourceLimit { needed: u64, budget: u64 },
    #[error("polynomial is not divisible by q + q^-1")]
    NotDivisible,
    #[error("edge map arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("cube has a 1->1 edge; homology over this field is undefined (state {state:#b}, crossing {crossing})")]
    OneOneEdge { state: u64, crossing: usize },
    #[error("polynomial has no tensor square root")]
    NoRoot,
    #[error("invalid cycle path: {0}")]
    InvalidPath(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
