use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::TraceEntry;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Error {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has {n} vertices, above the cap of {cap} for {what}")]
    CapExceeded { n: usize, cap: usize, what: String },
    #[error("vertex set is not contained in V(G)")]
    NotSubset,
    #[error("vertex sets overlap")]
    Overlap,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {0} belongs to the set it is tested against")]
    VertexInSet(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("input contains an induced {what}: {copy:?}")]
    ForbiddenCopy { what: String, copy: Vec<usize> },
    #[error("input graph is complete")]
    CompleteInput,
    #[error("anticomplete-pair supplier failed: {0}")]
    SupplierFailed(String),
    #[error("claim `{claim}` violated: {detail}")]
    ClaimViolation {
        claim: String,
        detail: String,
        trace: Vec<TraceEntry>,
    },
    #[error("gave up: {0}")]
    Exhausted(String),
    #[error("i/o: {0}")]
    Io(String),
}

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

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
