//! Matching state, validity and maximality checks, and exact maximum-matching oracles.

mod oracle;

use std::fmt;

use serde::Serialize;

use crate::error::OracleError;
use crate::graph::{DynamicGraph, EdgeKey, VertexId};

pub use oracle::{
    maximum_matching_blossom, maximum_matching_by_search, maximum_matching_size,
    DEFAULT_ORACLE_BOUND, SEARCH_ORACLE_BOUND,
};

/// Mate map with a cached matched-edge count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingState {
    mate: Vec<Option<VertexId>>,
    size: usize,
}

impl MatchingState {
    pub fn new(n: usize) -> Self {
        MatchingState {
            mate: vec![None; n],
            size: 0,
        }
    }

    #[inline]
    pub fn mate(&self, u: VertexId) -> Option<VertexId> {
        self.mate[u.index()]
    }

    #[inline]
    pub fn is_free(&self, u: VertexId) -> bool {
        self.mate[u.index()].is_none()
    }

    #[inline]
    pub fn is_matched_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.mate[u.index()] == Some(v)
    }

    /// Number of matched edges.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    /// Adds `(u, v)`; both endpoints must be free.
    pub fn join(&mut self, u: VertexId, v: VertexId) {
        assert!(u != v, "cannot match {u} with itself");
        assert!(
            self.is_free(u) && self.is_free(v),
            "join({u}, {v}) on a matched endpoint"
        );
        self.mate[u.index()] = Some(v);
        self.mate[v.index()] = Some(u);
        self.size += 1;
    }

    /// Removes the matched edge at `u`, returning the former mate.
    pub fn split(&mut self, u: VertexId) -> Option<VertexId> {
        let v = self.mate[u.index()].take()?;
        self.mate[v.index()] = None;
        self.size -= 1;
        Some(v)
    }

    /// Matched edges in ascending order of their smaller endpoint.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.mate.iter().enumerate().filter_map(|(u, m)| {
            let u = VertexId(u as u32);
            m.filter(|&v| u < v).and_then(|v| EdgeKey::new(u, v))
        })
    }

    /// Builds a matching from explicit pairs; panics on conflicts.
    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut m = MatchingState::new(n);
        for &(u, v) in pairs {
            m.join(VertexId(u), VertexId(v));
        }
        m
    }

    /// Overwrites a mate slot without keeping symmetry. Only for fault-injection tests.
    #[doc(hidden)]
    pub fn corrupt_mate(&mut self, u: VertexId, mate: Option<VertexId>) {
        self.mate[u.index()] = mate;
    }
}

/// Outcome of a maximality scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub maximal: bool,
    /// A live edge with both endpoints free, when one exists.
    pub witness: Option<EdgeKey>,
}

/// Checks mate symmetry, that every matched pair is a live edge, and that no
/// vertex is matched twice.
pub fn verify_matching(g: &DynamicGraph, m: &MatchingState) -> bool {
    if m.n() != g.n() {
        return false;
    }
    let mut pairs = 0usize;
    for u in g.vertices() {
        if let Some(v) = m.mate(u) {
            if v.index() >= g.n() || v == u || m.mate(v) != Some(u) || !g.has_edge(u, v) {
                return false;
            }
            if u < v {
                pairs += 1;
            }
        }
    }
    pairs == m.len()
}

pub fn check_maximal(g: &DynamicGraph, m: &MatchingState) -> MaximalityReport {
    let witness = g.edges().find(|e| m.is_free(e.lo()) && m.is_free(e.hi()));
    MaximalityReport {
        maximal: witness.is_none(),
        witness,
    }
}

/// Exact ratio `|matching| / maximum`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingRatio {
    pub matched: usize,
    pub maximum: usize,
}

impl MatchingRatio {
    pub fn as_f64(self) -> f64 {
        if self.maximum == 0 {
            1.0
        } else {
            self.matched as f64 / self.maximum as f64
        }
    }

    /// `matched / maximum >= 1/2`, decided in integers.
    pub fn is_at_least_half(self) -> bool {
        2 * self.matched >= self.maximum
    }

    pub fn is_exactly_half(self) -> bool {
        self.maximum > 0 && 2 * self.matched == self.maximum
    }
}

impl fmt::Display for MatchingRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.matched, self.maximum)
    }
}

/// Ratio of `m` to a maximum matching of `g`; an empty graph has ratio 1.
pub fn approximation_ratio(
    g: &DynamicGraph,
    m: &MatchingState,
) -> Result<MatchingRatio, OracleError> {
    let maximum = maximum_matching_size(g)?;
    debug_assert!(m.len() <= maximum);
    Ok(MatchingRatio {
        matched: m.len(),
        maximum,
    })
}
