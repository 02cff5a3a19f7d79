//! Multilevel maintainer on levels `-1..=L0`, `L0 = floor(log2 n)`.
//!
//! Every edge has a single owner, the endpoint on the higher level (smaller
//! id on a tie). For a vertex `v` on level `l` and `j > l` the rise potential
//!
//! ```text
//! phi_v(j) = |O_v| + sum over l <= k < j of |E_v^k|
//! ```
//!
//! counts the edges `v` would own on level `j`, where `E_v^k` holds the edges
//! of `v` owned by a neighbor on level `k`. After every update:
//!
//! 1. vertices on levels `>= 0` are matched and vertices on level `-1` are free;
//! 2. `phi_v(j) < 2^j` for every `v` and every `j > level(v)`;
//! 3. matched endpoints share a level.
//!
//! A deleted matched edge frees its endpoints, which enter a top-down wave:
//! on each level a free vertex either keeps `2^i` owned edges and settles with
//! a random mate, or falls one level, possibly letting lower neighbors rise.

mod audit;

use std::collections::VecDeque;

use indexmap::IndexSet;
use serde::Serialize;

use crate::error::{AuditViolation, GraphError, UpdateError};
use crate::graph::{DynamicGraph, EdgeKey, VertexId};
use crate::instrument::{EpochCause, EpochId, EpochLedger, WorkCounter, WorkKind};
use crate::maintainer::{Algorithm, Maintainer};
use crate::matching::MatchingState;
use crate::rng::SeededSource;

/// `floor(log2 n)`; 0 for `n = 1`.
pub fn top_level_for(n: usize) -> i32 {
    (usize::BITS - 1 - n.max(1).leading_zeros()) as i32
}

/// Counters for events the invariants say should not happen, plus some
/// structural activity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MultilevelStats {
    /// Rises triggered directly by an insertion.
    pub insert_rises: u64,
    /// Rises of a neighbor whose potential reached the threshold during a fall.
    pub fall_rises: u64,
    /// Rises found by re-checking a vertex right after it settled.
    pub late_rises: u64,
    pub falls: u64,
    pub settles: u64,
    /// Enqueues that targeted a level above the one being drained.
    pub queue_violations: u64,
    /// Initiators that settled on level `i` owning fewer than `2^i` or at
    /// least `2^(i+1)` edges.
    pub settle_bound_violations: u64,
    pub highest_level: i32,
}

#[derive(Clone, Debug)]
pub struct Multilevel {
    graph: DynamicGraph,
    matching: MatchingState,
    top: i32,
    level: Vec<i8>,
    owned: Vec<IndexSet<VertexId>>,
    /// `E_v^k` at `v * (top + 2) + (k + 1)`.
    incident: Vec<IndexSet<VertexId>>,
    /// `phi_v(j)` at `v * (top + 1) + j`.
    phi: Vec<u32>,
    queues: Vec<VecDeque<(VertexId, u64)>>,
    /// Stamp of the live queue entry of each vertex; 0 when not queued.
    queued: Vec<u64>,
    next_stamp: u64,
    wave_level: Option<i32>,
    rng: SeededSource,
    work: WorkCounter,
    ledger: EpochLedger,
    last_epoch: Vec<Option<EpochId>>,
    stats: MultilevelStats,
}

impl Multilevel {
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new(n)?;
        let top = top_level_for(n);
        let width = (top + 2) as usize;
        Ok(Multilevel {
            graph,
            matching: MatchingState::new(n),
            top,
            level: vec![-1; n],
            owned: vec![IndexSet::new(); n],
            incident: vec![IndexSet::new(); n * width],
            phi: vec![0; n * (top + 1) as usize],
            queues: vec![VecDeque::new(); (top + 1) as usize],
            queued: vec![0; n],
            next_stamp: 1,
            wave_level: None,
            rng: SeededSource::new(seed),
            work: WorkCounter::default(),
            ledger: EpochLedger::new(n),
            last_epoch: vec![None; n],
            stats: MultilevelStats {
                highest_level: -1,
                ..Default::default()
            },
        })
    }

    pub fn stats(&self) -> &MultilevelStats {
        &self.stats
    }

    pub fn rng(&self) -> &SeededSource {
        &self.rng
    }

    #[inline]
    fn lvl(&self, v: VertexId) -> i32 {
        self.level[v.index()] as i32
    }

    #[inline]
    fn e_slot(&self, v: VertexId, k: i32) -> usize {
        v.index() * (self.top + 2) as usize + (k + 1) as usize
    }

    #[inline]
    fn phi_slot(&self, v: VertexId, j: i32) -> usize {
        v.index() * (self.top + 1) as usize + j as usize
    }

    pub fn owned(&self, v: VertexId) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.owned[v.index()].iter().copied()
    }

    pub fn owned_count(&self, v: VertexId) -> usize {
        self.owned[v.index()].len()
    }

    /// Neighbors of `v` that own their edge with `v` and sit on level `k`.
    pub fn incident(&self, v: VertexId, k: i32) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.incident[self.e_slot(v, k)].iter().copied()
    }

    /// Owner of the live edge `key`.
    pub fn owner(&self, key: EdgeKey) -> Option<VertexId> {
        let (a, b) = key.endpoints();
        if self.owned[a.index()].contains(&b) {
            Some(a)
        } else if self.owned[b.index()].contains(&a) {
            Some(b)
        } else {
            None
        }
    }

    /// Stored `phi_v(j)` for `0 <= j <= L0`.
    pub fn phi(&self, v: VertexId, j: i32) -> u32 {
        self.phi[self.phi_slot(v, j)]
    }

    /// Largest `j > level(v)` with `phi_v(j) >= 2^j`.
    pub fn can_rise(&self, v: VertexId) -> Option<i32> {
        let base = self.lvl(v);
        (base + 1..=self.top)
            .rev()
            .find(|&j| self.phi(v, j) as u64 >= 1u64 << j)
    }

    /// Whether a queue holds a live entry.
    pub fn has_pending(&self) -> bool {
        self.queued.iter().any(|&s| s != 0)
    }

    fn increment_phi(&mut self, v: VertexId, j: i32) {
        let slot = self.phi_slot(v, j);
        self.phi[slot] += 1;
        self.work.add(WorkKind::PhiIncrement, 1);
    }

    /// `phi_v(j) -= 1` for `j` in `[from, to]`.
    fn decrement_phi(&mut self, v: VertexId, from: i32, to: i32) {
        for j in from.max(0)..=to {
            let slot = self.phi_slot(v, j);
            assert!(
                self.phi[slot] > 0,
                "rise potential of {v} at level {j} would underflow"
            );
            self.phi[slot] -= 1;
            self.work.add(WorkKind::PhiDecrement, 1);
        }
    }

    fn move_incident(&mut self, v: VertexId, owner: VertexId, from: i32, to: i32) {
        let a = self.e_slot(v, from);
        let b = self.e_slot(v, to);
        let removed = self.incident[a].swap_remove(&owner);
        debug_assert!(removed, "{owner} missing from E_{v}^{from}");
        self.incident[b].insert(owner);
        self.work.add(WorkKind::Transfer, 1);
    }

    fn enqueue(&mut self, v: VertexId, k: i32) {
        if k < 0 {
            return;
        }
        if self.wave_level.is_some_and(|cur| k > cur) {
            self.stats.queue_violations += 1;
        }
        let stamp = self.next_stamp;
        self.next_stamp += 1;
        self.queued[v.index()] = stamp;
        self.queues[k as usize].push_back((v, stamp));
        self.work.add(WorkKind::QueueOp, 1);
    }

    fn unqueue(&mut self, v: VertexId) {
        if self.queued[v.index()] != 0 {
            self.queued[v.index()] = 0;
            self.work.add(WorkKind::QueueOp, 1);
        }
    }

    fn charge(&mut self, epoch: Option<EpochId>, before: &WorkCounter) {
        if let Some(id) = epoch {
            let spent = self.work.since(before).without_decrements();
            self.ledger.charge(id, spent);
        }
    }

    fn split(&mut self, u: VertexId, cause: EpochCause) -> Result<Option<VertexId>, UpdateError> {
        let mate = self.matching.split(u);
        if mate.is_some() {
            self.ledger.end_at(u, cause)?;
        }
        Ok(mate)
    }

    /// Moves `u` up to level `i`, taking every edge whose owner sits on a level
    /// in `[level(u), i - 1]`. Edges `u` already owns move up in their other
    /// endpoint's incidence sets.
    fn acquire(&mut self, u: VertexId, i: i32) {
        let a = self.lvl(u);
        if a >= i {
            return;
        }
        let ui = u.index();
        for k in 0..self.owned[ui].len() {
            let w = self.owned[ui][k];
            self.move_incident(w, u, a, i);
            self.decrement_phi(w, a + 1, i);
        }
        for j in a..i {
            let slot = self.e_slot(u, j);
            let taken = std::mem::take(&mut self.incident[slot]);
            for w in taken {
                self.owned[w.index()].swap_remove(&u);
                self.owned[ui].insert(w);
                let target = self.e_slot(w, i);
                self.incident[target].insert(u);
                self.work.add(WorkKind::Transfer, 2);
                self.decrement_phi(w, j + 1, i);
            }
        }
        self.level[ui] = i as i8;
        self.stats.highest_level = self.stats.highest_level.max(i);
        for j in 0..=i {
            let slot = self.phi_slot(u, j);
            self.phi[slot] = 0;
        }
    }

    /// Settles free `u` on level `i` with a uniformly random owned mate `v`,
    /// which is raised to `i` as well. Returns the former mate of `v`.
    fn generic_random_settle(
        &mut self,
        u: VertexId,
        i: i32,
    ) -> Result<Option<VertexId>, UpdateError> {
        debug_assert!(self.matching.is_free(u));
        let before = self.work;
        self.acquire(u, i);
        let m = self.owned[u.index()].len();
        if m == 0 {
            return Err(UpdateError::Precondition(format!(
                "{u} settles on level {i} owning nothing"
            )));
        }
        if (m as u64) < 1u64 << i || (i < self.top && m as u64 >= 1u64 << (i + 1)) {
            self.stats.settle_bound_violations += 1;
        }
        let draws = self.rng.draws();
        let pick = self
            .rng
            .uniform_index(m as u64, self.graph.n() as u64)
            .expect("owned set fits in the vertex range");
        self.work.add(WorkKind::Sample, self.rng.draws() - draws);
        let v = self.owned[u.index()][(pick - 1) as usize];
        let displaced = self.split(v, EpochCause::Induced)?;
        self.unqueue(v);
        self.acquire(v, i);
        self.matching.join(u, v);
        let init: Vec<EdgeKey> = self.owned[u.index()]
            .iter()
            .map(|&w| EdgeKey::new(u, w).expect("distinct endpoints"))
            .collect();
        let key = EdgeKey::new(u, v).expect("distinct endpoints");
        let id = self.ledger.epoch_started(u, key, i, m, Some(init))?;
        self.last_epoch[u.index()] = Some(id);
        self.last_epoch[v.index()] = Some(id);
        self.charge(Some(id), &before);
        self.stats.settles += 1;
        Ok(displaced)
    }

    /// Raises `x` to level `i`: releases its mate, settles it there, and queues
    /// both freed vertices on their levels.
    fn rise(&mut self, x: VertexId, i: i32) -> Result<(), UpdateError> {
        if let Some(w) = self.split(x, EpochCause::Induced)? {
            let k = self.lvl(w);
            self.enqueue(w, k);
        }
        self.unqueue(x);
        if let Some(z) = self.generic_random_settle(x, i)? {
            let k = self.lvl(z);
            self.enqueue(z, k);
        }
        self.recheck(x)
    }

    /// Re-examines a freshly settled pair for a further rise.
    fn recheck(&mut self, x: VertexId) -> Result<(), UpdateError> {
        let mate = self.matching.mate(x);
        for z in std::iter::once(x).chain(mate) {
            if self.matching.mate(z).is_none() {
                continue;
            }
            if let Some(j) = self.can_rise(z) {
                self.stats.late_rises += 1;
                self.rise(z, j)?;
            }
        }
        Ok(())
    }

    /// Free `v` on level `i` disowns its edges towards level `i`. Returns
    /// whether it now owns fewer than `2^i` edges.
    fn falling(&mut self, v: VertexId) -> bool {
        let i = self.lvl(v);
        let vi = v.index();
        self.work.add(WorkKind::Scan, self.owned[vi].len() as u64);
        let same: Vec<VertexId> = self.owned[vi]
            .iter()
            .copied()
            .filter(|&u| self.lvl(u) == i)
            .collect();
        for u in same {
            self.owned[vi].swap_remove(&u);
            self.owned[u.index()].insert(v);
            let from = self.e_slot(u, i);
            self.incident[from].swap_remove(&v);
            let to = self.e_slot(v, i);
            self.incident[to].insert(u);
            self.work.add(WorkKind::Transfer, 2);
        }
        (self.owned[vi].len() as u64) < 1u64 << i
    }

    /// `v` drops from `i` to `i - 1`. Lower neighbors gain one unit of
    /// potential at `i`; those reaching `2^i` rise to `i` afterwards.
    /// Moves `v` from level `i` to `i - 1` and returns its owned neighbors,
    /// each of which gained one unit of potential at index `i`.
    fn descend(&mut self, v: VertexId, i: i32) -> Vec<VertexId> {
        self.stats.falls += 1;
        self.level[v.index()] = (i - 1) as i8;
        self.enqueue(v, i - 1);
        let below: Vec<VertexId> = self.owned[v.index()].iter().copied().collect();
        for &u in &below {
            self.move_incident(u, v, i, i - 1);
            self.increment_phi(u, i);
            self.increment_phi(v, i);
        }
        below
    }

    fn fall(&mut self, v: VertexId, i: i32) -> Result<(), UpdateError> {
        let below = self.descend(v, i);
        for &u in &below {
            if self.lvl(u) < i && self.phi(u, i) as u64 >= 1u64 << i {
                self.stats.fall_rises += 1;
                self.rise(u, i)?;
            }
        }
        Ok(())
    }

    /// Drains the queues from the top level down until every queued vertex has
    /// settled or reached level `-1`.
    fn run_wave(&mut self) -> Result<(), UpdateError> {
        loop {
            for i in (0..=self.top).rev() {
                self.wave_level = Some(i);
                while let Some((v, stamp)) = self.queues[i as usize].pop_front() {
                    self.work.add(WorkKind::QueueOp, 1);
                    if self.queued[v.index()] != stamp {
                        continue;
                    }
                    self.queued[v.index()] = 0;
                    if !self.matching.is_free(v) || self.lvl(v) != i {
                        continue;
                    }
                    let before = self.work;
                    let stays = !self.falling(v);
                    if stays {
                        self.charge(self.last_epoch[v.index()], &before);
                        if let Some(z) = self.generic_random_settle(v, i)? {
                            let k = self.lvl(z);
                            self.enqueue(z, k);
                        }
                        self.recheck(v)?;
                    } else {
                        self.fall(v, i)?;
                        self.charge(self.last_epoch[v.index()], &before);
                    }
                }
            }
            self.wave_level = None;
            if self.queues.iter().all(VecDeque::is_empty) {
                return Ok(());
            }
            self.stats.queue_violations += 1;
        }
    }

    #[doc(hidden)]
    pub fn corrupt_phi(&mut self, v: VertexId, j: i32, value: u32) {
        let slot = self.phi_slot(v, j);
        self.phi[slot] = value;
    }
}

impl Maintainer for Multilevel {
    fn algorithm(&self) -> Algorithm {
        Algorithm::Multilevel
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        let key = self.graph.insert_raw(u, v)?.key;
        self.work.add(WorkKind::Update, 1);
        let (a, b) = key.endpoints();
        let (la, lb) = (self.lvl(a), self.lvl(b));
        let (owner, other) = if lb > la { (b, a) } else { (a, b) };
        let lo = self.lvl(owner);
        self.owned[owner.index()].insert(other);
        let slot = self.e_slot(other, lo);
        self.incident[slot].insert(owner);
        for j in la.max(lb) + 1..=self.top {
            self.increment_phi(a, j);
            self.increment_phi(b, j);
        }
        let pick = match (self.can_rise(a), self.can_rise(b)) {
            (Some(i), Some(j)) if j > i => Some((b, j)),
            (Some(i), _) => Some((a, i)),
            (None, Some(j)) => Some((b, j)),
            (None, None) => None,
        };
        if let Some((x, i)) = pick {
            self.stats.insert_rises += 1;
            self.rise(x, i)?;
            self.run_wave()?;
            while let Some((z, j)) = [a, b]
                .into_iter()
                .find_map(|z| self.can_rise(z).map(|j| (z, j)))
            {
                self.stats.late_rises += 1;
                self.rise(z, j)?;
                self.run_wave()?;
            }
        }
        self.ledger.advance();
        Ok(())
    }

    fn delete(&mut self, u: VertexId, v: VertexId) -> Result<(), UpdateError> {
        let key = self.graph.check_deletable(u, v)?;
        let (a, b) = key.endpoints();
        let occurrence = self.graph.live_occurrence(key).expect("edge is live");
        let owner = self.owner(key).expect("live edge has an owner");
        let other = key.other(owner);
        let lo = self.lvl(owner);
        let top_of_edge = self.lvl(a).max(self.lvl(b));
        self.ledger
            .on_edge_deleted(occurrence, Some(owner), top_of_edge);
        for j in top_of_edge + 1..=self.top {
            self.decrement_phi(a, j, j);
            self.decrement_phi(b, j, j);
        }
        self.owned[owner.index()].swap_remove(&other);
        let slot = self.e_slot(other, lo);
        self.incident[slot].swap_remove(&owner);
        self.graph.delete_raw(a, b)?;
        self.work.add(WorkKind::Update, 1);
        if self.matching.is_matched_edge(a, b) {
            let k = self.lvl(a);
            self.split(a, EpochCause::Natural)?;
            self.enqueue(a, k);
            self.enqueue(b, k);
            self.run_wave()?;
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
        self.audit_invariants()
    }

    fn work(&self) -> &WorkCounter {
        &self.work
    }

    fn ledger(&self) -> &EpochLedger {
        &self.ledger
    }

    fn level(&self, v: VertexId) -> i32 {
        self.lvl(v)
    }

    fn top_level(&self) -> i32 {
        self.top
    }

    fn multilevel_stats(&self) -> Option<MultilevelStats> {
        Some(self.stats)
    }
}
