//! Fully dynamic maximal matching.
//!
//! Three maintainers keep a maximal matching of a graph on a fixed vertex set
//! under arbitrary edge insertions and deletions:
//!
//! * [`TrivialMaintainer`] rescans neighborhoods when a matched edge goes away.
//! * [`TwoLevel`] splits vertices into two levels around a `ceil(sqrt(n))`
//!   ownership threshold and picks random mates for heavy vertices.
//! * [`Multilevel`] generalizes this to levels `-1..=floor(log2 n)` with
//!   rise potentials and a top-down wave of falling free vertices.
//!
//! All of them implement [`Maintainer`], expose a full structural audit, count
//! elementary operations in a [`WorkCounter`] and record matched-edge epochs in
//! an [`EpochLedger`]. The [`harness`] module generates, parses and replays
//! update streams.
//!
//! ```
//! use dynmatch::{Algorithm, VertexId};
//!
//! let mut m = Algorithm::Multilevel.build(8, 7).unwrap();
//! m.insert(VertexId(0), VertexId(1)).unwrap();
//! m.insert(VertexId(1), VertexId(2)).unwrap();
//! m.delete(VertexId(0), VertexId(1)).unwrap();
//! m.audit().unwrap();
//! assert_eq!(m.matching().mate(VertexId(1)), Some(VertexId(2)));
//! ```

pub mod error;
pub mod graph;
pub mod harness;
pub mod instrument;
mod maintainer;
pub mod matching;
pub mod multilevel;
pub mod rng;
pub mod trivial;
pub mod two_level;

pub use error::{
    AuditViolation, EpochError, GraphError, OracleError, ReplayError, SampleError, StreamError,
    UpdateError,
};
pub use graph::{DynamicGraph, EdgeKey, EdgeOccurrence, VertexId};
pub use instrument::{
    EpochCause, EpochId, EpochLedger, EpochRecord, LevelEpochStats, WorkCounter, WorkKind,
};
pub use maintainer::{Algorithm, Maintainer};
pub use matching::{
    approximation_ratio, check_maximal, maximum_matching_size, verify_matching, MatchingRatio,
    MatchingState, MaximalityReport,
};
pub use multilevel::Multilevel;
pub use rng::SeededSource;
pub use trivial::TrivialMaintainer;
pub use two_level::TwoLevel;
