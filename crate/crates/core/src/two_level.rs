//! Two-level maintainer with an ownership threshold of `ceil(sqrt(n))`.
//!
//! Invariants restored after every update:
//!
//! 1. every level-1 vertex is matched, and every free level-0 vertex has only
//!    matched neighbors;
//! 2. every level-0 vertex owns fewer than `threshold` edges;
//! 3. matched endpoints share a level.
//!
//! An edge between two level-0 vertices is owned by both of them; any other
//! edge is owned by exactly one endpoint at level 1.

use indexmap::IndexSet;

use crate::error::{AuditViolation, GraphError, UpdateError};
use crate::graph::{DynamicGraph, EdgeKey, VertexId};
use crate::instrument::{EpochCause, EpochId, EpochLedger, WorkCounter, WorkKind};
use crate::maintainer::{Algorithm, Maintainer};
use crate::matching::{check_maximal, verify_matching, MatchingState};
use crate::rng::SeededSource;

/// `ceil(sqrt(n))`, computed in integers.
pub fn threshold_for(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

#[derive(Clone, Debug)]
pub struct TwoLevel {
    graph: DynamicGraph,
    matching: MatchingState,
    level: Vec<u8>,
    owned: Vec<IndexSet<VertexId>>,
    threshold: usize,
    rng: SeededSource,
    work: WorkCounter,
    ledger: EpochLedger,
    last_epoch: Vec<Option<EpochId>>,
}

impl TwoLevel {
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        Ok(TwoLevel {
            graph: DynamicGraph::new(n)?,
            matching: MatchingState::new(n),
            level: vec![0; n],
            owned: vec![IndexSet::new(); n],
            threshold: threshold_for(n),
            rng: SeededSource::new(seed),
            work: WorkCounter::default(),
            ledger: EpochLedger::new(n),
            last_epoch: vec![None; n],
        })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn owned(&self, u: VertexId) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.owned[u.index()].iter().copied()
    }

    pub fn owned_count(&self, u: VertexId) -> usize {
        self.owned[u.index()].len()
    }

    pub fn rng(&self) -> &SeededSource {
        &self.rng
    }

    fn lvl(&self, u: VertexId) -> u8 {
        self.level[u.index()]
    }

    fn charge(&mut self, epoch: Option<EpochId>, before: &WorkCounter) {
        if let Some(id) = epoch {
            let spent = self.work.since(before).without_decrements();
            self.ledger.charge(id, spent);
        }
    }

    /// Unmatches `u`, ending its epoch with `cause`; returns the former mate.
    fn split(&mut self, u: VertexId, cause: EpochCause) -> Result<Option<VertexId>, UpdateError> {
        let mate = self.matching.split(u);
        if mate.is_some() {
            self.ledger.end_at(u, cause)?;
        }
        Ok(mate)
    }

    fn start_epoch(
        &mut self,
        initiator: VertexId,
        mate: VertexId,
        level: i32,
        owned_at_init: usize,
        init: Option<Vec<EdgeKey>>,
    ) -> Result<EpochId, UpdateError> {
        let key = EdgeKey::new(initiator, mate).expect("distinct endpoints");
        let id = self
            .ledger
            .epoch_started(initiator, key, level, owned_at_init, init)?;
        self.last_epoch[initiator.index()] = Some(id);
        self.last_epoch[mate.index()] = Some(id);
        Ok(id)
    }

    /// Removes the second ownership of every shared edge of level-0 vertex `x`.
    fn take_sole_ownership(&mut self, x: VertexId) {
        let xi = x.index();
        for k in 0..self.owned[xi].len() {
            let w = self.owned[xi][k];
            if self.owned[w.index()].swap_remove(&x) {
                self.work.add(WorkKind::Transfer, 1);
            }
        }
    }

    /// Settles free vertex `u` at level 1 with a uniformly random owned mate.
    ///
    /// A level-0 `u` first takes sole ownership of its edges. The chosen mate
    /// rises too; its former mate, now free, is returned. `u` must be free:
    /// callers release its mate themselves.
    pub fn random_settle(&mut self, u: VertexId) -> Result<Option<VertexId>, UpdateError> {
        if !self.matching.is_free(u) {
            return Err(UpdateError::Precondition(format!(
                "random settle of matched vertex {u}"
            )));
        }
        if self.owned[u.index()].is_empty() {
            return Err(UpdateError::Precondition(format!(
                "random settle of {u} owning nothing"
            )));
        }
        let before = self.work;
        if self.lvl(u) == 0 {
            self.take_sole_ownership(u);
            self.level[u.index()] = 1;
        }
        let m = self.owned[u.index()].len();
        let draws = self.rng.draws();
        let pick = self
            .rng
            .uniform_index(m as u64, self.graph.n() as u64)
            .expect("owned set fits in the vertex range");
        self.work.add(WorkKind::Sample, self.rng.draws() - draws);
        let y = self.owned[u.index()][(pick - 1) as usize];
        let displaced = self.split(y, EpochCause::Induced)?;
        if self.lvl(y) == 0 {
            self.take_sole_ownership(y);
            self.level[y.index()] = 1;
        }
        self.matching.join(u, y);
        let init: Vec<EdgeKey> = self.owned[u.index()]
            .iter()
            .map(|&w| EdgeKey::new(u, w).expect("distinct endpoints"))
            .collect();
        let id = self.start_epoch(u, y, 1, m, Some(init))?;
        self.charge(Some(id), &before);
        Ok(displaced)
    }

    /// Matches a free level-0 vertex with the first free vertex among its owned
    /// edges. Does nothing for matched or level-1 vertices.
    pub fn naive_settle(&mut self, u: VertexId) -> Result<(), UpdateError> {
        if !self.matching.is_free(u) || self.lvl(u) != 0 {
            return Ok(());
        }
        let before = self.work;
        let mut found = None;
        for &w in &self.owned[u.index()] {
            self.work.add(WorkKind::Scan, 1);
            if self.matching.is_free(w) {
                found = Some(w);
                break;
            }
        }
        match found {
            Some(w) => {
                self.matching.join(u, w);
                let owned = self.owned[u.index()].len();
                let id = self.start_epoch(u, w, 0, owned, None)?;
                self.charge(Some(id), &before);
            }
            None => self.charge(self.last_epoch[u.index()], &before),
        }
        Ok(())
    }

    /// Moves level-0 vertex `x`, matched or not, to level 1.
    fn lift(&mut self, x: VertexId) -> Result<(), UpdateError> {
        let released = self.split(x, EpochCause::Induced)?;
        let displaced = self.random_settle(x)?;
        for z in [released, displaced].into_iter().flatten() {
            self.naive_settle(z)?;
        }
        Ok(())
    }

    /// Restores the invariants of `x` after its level-1 matched edge was deleted.
    fn handle_deletion(&mut self, x: VertexId) -> Result<(), UpdateError> {
        if !self.matching.is_free(x) || self.lvl(x) != 1 {
            return Ok(());
        }
        let before = self.work;
        let xi = x.index();
        self.work.add(WorkKind::Scan, self.owned[xi].len() as u64);
        let upper: Vec<VertexId> = self.owned[xi]
            .iter()
            .copied()
            .filter(|&w| self.lvl(w) == 1)
            .collect();
        for w in upper {
            self.owned[xi].swap_remove(&w);
            self.owned[w.index()].insert(x);
            self.work.add(WorkKind::Transfer, 1);
        }
        if self.owned[xi].len() >= self.threshold {
            self.charge(self.last_epoch[xi], &before);
            if let Some(z) = self.random_settle(x)? {
                self.naive_settle(z)?;
            }
            return Ok(());
        }
        self.level[xi] = 0;
        for k in 0..self.owned[xi].len() {
            let w = self.owned[xi][k];
            self.owned[w.index()].insert(x);
            self.work.add(WorkKind::Transfer, 1);
        }
        self.charge(self.last_epoch[xi], &before);
        self.naive_settle(x)?;
        let neighbors: Vec<VertexId> = self.owned[xi].iter().copied().collect();
        for w in neighbors {
            self.work.add(WorkKind::Scan, 1);
            if self.lvl(w) == 0 && self.owned[w.index()].len() >= self.threshold {
                self.lift(w)?;
            }
        }
        Ok(())
    }

    #[doc(hidden)]
    pub fn corrupt_level(&mut self, u: VertexId, level: u8) {
        self.level[u.index()] = level;
    }
}

impl Maintainer for TwoLevel {
    fn algorithm(&self) -> Algorithm {
        Algorithm::TwoLevel
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        self.graph.insert_raw(u, v)?;
        self.work.add(WorkKind::Update, 1);
        if self.lvl(u) == 1 || self.lvl(v) == 1 {
            let (owner, other) = if self.lvl(u) == 1 { (u, v) } else { (v, u) };
            self.owned[owner.index()].insert(other);
        } else {
            self.owned[u.index()].insert(v);
            self.owned[v.index()].insert(u);
            if self.matching.is_free(u) && self.matching.is_free(v) {
                self.matching.join(u, v);
                let owned = self.owned[u.index()].len();
                self.start_epoch(u, v, 0, owned, None)?;
            }
            let x = if self.owned[v.index()].len() > self.owned[u.index()].len() {
                v
            } else {
                u
            };
            if self.owned[x.index()].len() >= self.threshold {
                self.lift(x)?;
            }
        }
        self.ledger.advance();
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        let key = self.graph.check_deletable(u, v)?;
        let (a, b) = key.endpoints();
        let occurrence = self.graph.live_occurrence(key).expect("edge is live");
        let level = self.lvl(a).max(self.lvl(b));
        let owner = if level == 0 {
            None
        } else if self.owned[a.index()].contains(&b) {
            Some(a)
        } else {
            Some(b)
        };
        self.ledger.on_edge_deleted(occurrence, owner, level as i32);
        self.owned[a.index()].swap_remove(&b);
        self.owned[b.index()].swap_remove(&a);
        self.graph.delete_raw(a, b)?;
        self.work.add(WorkKind::Update, 1);
        if self.matching.is_matched_edge(a, b) {
            self.split(a, EpochCause::Natural)?;
            if level == 0 {
                self.naive_settle(a)?;
                self.naive_settle(b)?;
            } else {
                self.handle_deletion(a)?;
                self.handle_deletion(b)?;
            }
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
        let mut entries = 0usize;
        for e in self.graph.edges() {
            let (a, b) = e.endpoints();
            let in_a = self.owned[a.index()].contains(&b);
            let in_b = self.owned[b.index()].contains(&a);
            match (self.lvl(a), self.lvl(b)) {
                (0, 0) if !(in_a && in_b) => {
                    return Err(AuditViolation::new(format!(
                        "level-0 edge {e} is not shared"
                    )));
                }
                (1, 0) if !in_a || in_b => {
                    return Err(AuditViolation::new(format!(
                        "edge {e} not owned by {a} alone"
                    )));
                }
                (0, 1) if in_a || !in_b => {
                    return Err(AuditViolation::new(format!(
                        "edge {e} not owned by {b} alone"
                    )));
                }
                (1, 1) if in_a == in_b => {
                    return Err(AuditViolation::new(format!(
                        "level-1 edge {e} needs one owner"
                    )));
                }
                _ => {}
            }
            entries += in_a as usize + in_b as usize;
        }
        let stored: usize = self.owned.iter().map(IndexSet::len).sum();
        if stored != entries {
            return Err(AuditViolation::new(
                "ownership sets hold edges that are not live",
            ));
        }
        for u in self.graph.vertices() {
            let lvl = self.lvl(u);
            if lvl > 1 {
                return Err(AuditViolation::new(format!("vertex {u} at level {lvl}")));
            }
            match self.matching.mate(u) {
                Some(w) if self.lvl(w) != lvl => {
                    return Err(AuditViolation::new(format!(
                        "matched pair {u}-{w} spans levels"
                    )));
                }
                None if lvl == 1 => {
                    return Err(AuditViolation::new(format!("free vertex {u} at level 1")));
                }
                _ => {}
            }
            if lvl == 0 && self.owned[u.index()].len() >= self.threshold {
                return Err(AuditViolation::new(format!(
                    "level-0 vertex {u} owns {} edges, threshold {}",
                    self.owned[u.index()].len(),
                    self.threshold
                )));
            }
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

    fn level(&self, v: VertexId) -> i32 {
        self.lvl(v) as i32
    }

    fn top_level(&self) -> i32 {
        1
    }
}
