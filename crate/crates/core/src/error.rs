use thiserror::Error;

use crate::graph::{EdgeKey, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    EmptyVertexSet,
    #[error("{0} vertices exceed the 32-bit vertex id space")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0} is already present")]
    DuplicateEdge(EdgeKey),
    #[error("edge {0} is not present")]
    MissingEdge(EdgeKey),
    #[error("graph structure corrupt: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph with {n} vertices exceeds the oracle bound of {bound}")]
    TooLarge { n: usize, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("cannot sample from an empty range")]
    EmptyRange,
    #[error("range size {m} exceeds the source range {n}")]
    RangeTooLarge { m: u64, n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpochError {
    #[error("vertex {0} already takes part in a live epoch")]
    AlreadyLive(VertexId),
    #[error("epoch {0} is not live")]
    NotLive(usize),
}

/// First invariant violation found by a structural audit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct AuditViolation(pub String);

impl AuditViolation {
    pub fn new(msg: impl Into<String>) -> Self {
        AuditViolation(msg.into())
    }
}

impl From<GraphError> for AuditViolation {
    fn from(e: GraphError) -> Self {
        AuditViolation(e.to_string())
    }
}

/// Failure while applying an update to a maintainer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Epoch(#[from] EpochError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("update {index}: {source}")]
    Illegal {
        index: usize,
        #[source]
        source: GraphError,
    },
    #[error("header declares {declared} updates but {found} were read")]
    LengthMismatch { declared: usize, found: usize },
    #[error("infeasible stream request: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("update {index}: {source}")]
    Update {
        index: usize,
        #[source]
        source: UpdateError,
    },
    #[error("audit failed after update {index}: {violation}")]
    Audit {
        index: usize,
        violation: AuditViolation,
    },
    #[error("oracle check failed: {0}")]
    Oracle(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
