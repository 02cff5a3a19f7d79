use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AuditViolation, GraphError, UpdateError};
use crate::graph::{DynamicGraph, VertexId};
use crate::instrument::{EpochLedger, WorkCounter};
use crate::matching::MatchingState;
use crate::multilevel::{Multilevel, MultilevelStats};
use crate::trivial::TrivialMaintainer;
use crate::two_level::TwoLevel;

/// A structure that keeps a maximal matching of its own graph.
pub trait Maintainer {
    fn algorithm(&self) -> Algorithm;

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError>;

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError>;

    fn graph(&self) -> &DynamicGraph;

    fn matching(&self) -> &MatchingState;

    /// Full recomputation of every structural invariant, maximality included.
    fn audit(&self) -> Result<(), AuditViolation>;

    fn work(&self) -> &WorkCounter;

    fn ledger(&self) -> &EpochLedger;

    /// Level of `v`; maintainers without levels report 0.
    fn level(&self, v: VertexId) -> i32;

    /// Highest level this maintainer can use.
    fn top_level(&self) -> i32;

    /// Structural event counters, for maintainers that keep them.
    fn multilevel_stats(&self) -> Option<MultilevelStats> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Trivial,
    TwoLevel,
    Multilevel,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Trivial,
        Algorithm::TwoLevel,
        Algorithm::Multilevel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Trivial => "trivial",
            Algorithm::TwoLevel => "two-level",
            Algorithm::Multilevel => "multilevel",
        }
    }

    /// Empty maintainer on `n` vertices. `seed` is ignored by the trivial one.
    pub fn build(self, n: usize, seed: u64) -> Result<Box<dyn Maintainer + Send>, GraphError> {
        Ok(match self {
            Algorithm::Trivial => Box::new(TrivialMaintainer::new(n)?),
            Algorithm::TwoLevel => Box::new(TwoLevel::new(n, seed)?),
            Algorithm::Multilevel => Box::new(Multilevel::new(n, seed)?),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(Algorithm::Trivial),
            "two-level" | "two_level" | "2level" => Ok(Algorithm::TwoLevel),
            "multilevel" | "multi-level" => Ok(Algorithm::Multilevel),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}
