//! Ground-truth dynamic graph shared by every maintainer and by the verifiers.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense vertex index in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId(v as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered pair of distinct vertices, stored smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    lo: VertexId,
    hi: VertexId,
}

impl EdgeKey {
    /// Canonicalizes `(u, v)`. Returns `None` for a self-loop.
    pub fn new(u: VertexId, v: VertexId) -> Option<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(EdgeKey { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Some(EdgeKey { lo: v, hi: u }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(self, x: VertexId) -> VertexId {
        debug_assert!(x == self.lo || x == self.hi);
        if x == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The `occurrence`-th time `key` has been inserted into the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeOccurrence {
    pub key: EdgeKey,
    pub occurrence: u32,
}

/// Undirected simple graph on a fixed vertex set.
///
/// Adjacency sets are insertion-ordered hash sets, so membership, insert and
/// delete are O(1) expected and iteration is proportional to the degree.
/// Iteration order depends only on the sequence of operations, which keeps
/// every maintainer built on top of it reproducible.
#[derive(Clone, Debug)]
pub struct DynamicGraph {
    adjacency: Vec<IndexSet<VertexId>>,
    occurrences: HashMap<EdgeKey, u32>,
    m: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        if n > u32::MAX as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(DynamicGraph {
            adjacency: vec![IndexSet::new(); n],
            occurrences: HashMap::new(),
            m: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of live edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adjacency[u.index()].len()
    }

    pub fn neighbors(&self, u: VertexId) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.adjacency[u.index()].iter().copied()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.n() as u32).map(VertexId)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u.index() < self.n() && self.adjacency[u.index()].contains(&v)
    }

    /// Every live edge, each reported once.
    pub fn edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, adj)| {
            let u = VertexId(u as u32);
            adj.iter()
                .filter(move |&&v| u < v)
                .map(move |&v| EdgeKey { lo: u, hi: v })
        })
    }

    /// How many times `key` has been inserted so far.
    pub fn occurrence_count(&self, key: EdgeKey) -> u32 {
        self.occurrences.get(&key).copied().unwrap_or(0)
    }

    /// The occurrence of `key` that is currently live, if any.
    pub fn live_occurrence(&self, key: EdgeKey) -> Option<EdgeOccurrence> {
        if self.has_edge(key.lo, key.hi) {
            Some(EdgeOccurrence {
                key,
                occurrence: self.occurrence_count(key),
            })
        } else {
            None
        }
    }

    pub fn check_vertex(&self, u: VertexId) -> Result<(), GraphError> {
        if u.index() < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: u,
                n: self.n(),
            })
        }
    }

    /// Validates an insertion without applying it.
    pub fn check_insertable(&self, u: VertexId, v: VertexId) -> Result<EdgeKey, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let key = EdgeKey::new(u, v).ok_or(GraphError::SelfLoop(u))?;
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(key));
        }
        Ok(key)
    }

    /// Validates a deletion without applying it.
    pub fn check_deletable(&self, u: VertexId, v: VertexId) -> Result<EdgeKey, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let key = EdgeKey::new(u, v).ok_or(GraphError::SelfLoop(u))?;
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(key));
        }
        Ok(key)
    }

    pub fn insert_raw(&mut self, u: VertexId, v: VertexId) -> Result<EdgeOccurrence, GraphError> {
        let key = self.check_insertable(u, v)?;
        self.adjacency[u.index()].insert(v);
        self.adjacency[v.index()].insert(u);
        self.m += 1;
        let counter = self.occurrences.entry(key).or_insert(0);
        *counter += 1;
        Ok(EdgeOccurrence {
            key,
            occurrence: *counter,
        })
    }

    pub fn delete_raw(&mut self, u: VertexId, v: VertexId) -> Result<EdgeKey, GraphError> {
        let key = self.check_deletable(u, v)?;
        self.adjacency[u.index()].swap_remove(&v);
        self.adjacency[v.index()].swap_remove(&u);
        self.m -= 1;
        Ok(key)
    }

    /// Recomputes the symmetry and edge-count invariants from scratch.
    pub fn audit(&self) -> Result<(), GraphError> {
        let mut half_degree_sum = 0usize;
        for (u, adj) in self.adjacency.iter().enumerate() {
            let u = VertexId(u as u32);
            for &v in adj {
                if v == u {
                    return Err(GraphError::Corrupt(format!("self-loop stored at {u}")));
                }
                if v.index() >= self.n() || !self.adjacency[v.index()].contains(&u) {
                    return Err(GraphError::Corrupt(format!(
                        "adjacency of {u} lists {v} but not vice versa"
                    )));
                }
            }
            half_degree_sum += adj.len();
        }
        if half_degree_sum != 2 * self.m {
            return Err(GraphError::Corrupt(format!(
                "edge count {} disagrees with degree sum {}",
                self.m, half_degree_sum
            )));
        }
        Ok(())
    }
}

impl PartialEq for DynamicGraph {
    /// Two graphs are equal when they have the same vertex count and the same
    /// live edge set. Occurrence history is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self.m == other.m
            && self
                .adjacency
                .iter()
                .zip(&other.adjacency)
                .all(|(a, b)| a.len() == b.len() && a.iter().all(|x| b.contains(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn new_graph_is_empty() {
        let g = DynamicGraph::new(4).unwrap();
        assert_eq!(g.m(), 0);
        assert!(g.vertices().all(|u| g.degree(u) == 0));
        assert_eq!(DynamicGraph::new(1).unwrap().n(), 1);
        assert_eq!(
            DynamicGraph::new(0).unwrap_err(),
            GraphError::EmptyVertexSet
        );
    }

    #[test]
    fn occurrence_index_counts_reinsertions() {
        let mut g = DynamicGraph::new(4).unwrap();
        let first = g.insert_raw(v(0), v(1)).unwrap();
        assert_eq!(first.occurrence, 1);
        assert_eq!(g.m(), 1);
        g.delete_raw(v(1), v(0)).unwrap();
        assert_eq!(g.occurrence_count(first.key), 1);
        let second = g.insert_raw(v(1), v(0)).unwrap();
        assert_eq!(second.occurrence, 2);
        assert_eq!(second.key, first.key);
    }

    #[test]
    fn insert_errors() {
        let mut g = DynamicGraph::new(4).unwrap();
        assert_eq!(g.insert_raw(v(2), v(2)), Err(GraphError::SelfLoop(v(2))));
        g.insert_raw(v(0), v(1)).unwrap();
        assert!(matches!(
            g.insert_raw(v(1), v(0)),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            g.insert_raw(v(0), v(4)),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn delete_is_local_and_strict() {
        let mut g = DynamicGraph::new(4).unwrap();
        g.insert_raw(v(0), v(1)).unwrap();
        g.insert_raw(v(2), v(3)).unwrap();
        g.delete_raw(v(0), v(1)).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.degree(v(2)), 1);
        assert!(matches!(
            g.delete_raw(v(0), v(1)),
            Err(GraphError::MissingEdge(_))
        ));
        g.audit().unwrap();
    }

    #[test]
    fn edge_key_is_canonical() {
        let a = EdgeKey::new(v(5), v(2)).unwrap();
        let b = EdgeKey::new(v(2), v(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lo(), v(2));
        assert_eq!(a.other(v(2)), v(5));
        assert!(EdgeKey::new(v(1), v(1)).is_none());
    }
}
