//! Baseline maintainer: match on insertion when both ends are free, rescan
//! both neighborhoods when a matched edge is deleted.

use crate::error::{AuditViolation, GraphError, UpdateError};
use crate::graph::{DynamicGraph, EdgeKey, VertexId};
use crate::instrument::{EpochCause, EpochLedger, WorkCounter, WorkKind};
use crate::maintainer::{Algorithm, Maintainer};
use crate::matching::{check_maximal, verify_matching, MatchingState};

#[derive(Clone, Debug)]
pub struct TrivialMaintainer {
    graph: DynamicGraph,
    matching: MatchingState,
    work: WorkCounter,
    ledger: EpochLedger,
}

impl TrivialMaintainer {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        Ok(TrivialMaintainer {
            graph: DynamicGraph::new(n)?,
            matching: MatchingState::new(n),
            work: WorkCounter::default(),
            ledger: EpochLedger::new(n),
        })
    }

    fn join(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        self.matching.join(u, v);
        let key = EdgeKey::new(u, v).expect("distinct endpoints");
        self.ledger
            .epoch_started(u, key, 0, 0, None::<Vec<EdgeKey>>)?;
        Ok(())
    }

    /// Matches `u` with its smallest free neighbor, if any.
    fn scan(&mut self, u: VertexId) -> Result<(), UpdateError> {
        if !self.matching.is_free(u) {
            return Ok(());
        }
        self.work.add(WorkKind::Scan, self.graph.degree(u) as u64);
        let best = self
            .graph
            .neighbors(u)
            .filter(|&w| self.matching.is_free(w))
            .min();
        if let Some(w) = best {
            self.join(u, w)?;
        }
        Ok(())
    }
}

impl Maintainer for TrivialMaintainer {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Trivial
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        self.graph.insert_raw(u, v)?;
        self.work.add(WorkKind::Update, 1);
        if self.matching.is_free(u) && self.matching.is_free(v) {
            self.join(u, v)?;
        }
        self.ledger.advance();
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        let key = self.graph.check_deletable(u, v)?;
        let occurrence = self.graph.live_occurrence(key).expect("edge is live");
        self.ledger.on_edge_deleted(occurrence, None, 0);
        self.graph.delete_raw(u, v)?;
        self.work.add(WorkKind::Update, 1);
        if self.matching.is_matched_edge(u, v) {
            self.matching.split(u);
            self.ledger.end_at(u, EpochCause::Natural)?;
            let (a, b) = key.endpoints();
            self.scan(a)?;
            self.scan(b)?;
        }
        self.ledger.advance();
        Ok(())
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    fn matching(&self) -> &MatchingState {
        &self.matching
    }

    fn audit(&self) -> Result<(), AuditViolation> {
        self.graph.audit()?;
        if !verify_matching(&self.graph, &self.matching) {
            return Err(AuditViolation::new("matching is not valid for the graph"));
        }
        if let Some(e) = check_maximal(&self.graph, &self.matching).witness {
            return Err(AuditViolation::new(format!(
                "edge {e} has two free endpoints"
            )));
        }
        Ok(())
    }

    fn work(&self) -> &WorkCounter {
        &self.work
    }

    fn ledger(&self) -> &EpochLedger {
        &self.ledger
    }

    fn level(&self, _v: VertexId) -> i32 {
        0
    }

    fn top_level(&self) -> i32 {
        0
    }
}
