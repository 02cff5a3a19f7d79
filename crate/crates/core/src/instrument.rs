//! Work counters and the epoch ledger.
//!
//! An epoch is the maximal stretch of updates during which one edge stays
//! matched. It is *natural* when it ends because the edge was deleted and
//! *induced* when it ends because an endpoint was re-matched. Each induced
//! epoch records the epoch whose creation ended it, so charged cost can be
//! rolled up along that chain.
//!
//! One elementary operation is one ownership transfer, one change of a
//! rise-potential slot, one queue operation, one scanned edge, one random
//! draw, or the constant bookkeeping of a single update.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::EpochError;
use crate::graph::{EdgeKey, EdgeOccurrence, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorkKind {
    Update,
    Transfer,
    PhiIncrement,
    PhiDecrement,
    QueueOp,
    Scan,
    Sample,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WorkCounter {
    pub updates: u64,
    pub transfers: u64,
    pub phi_increments: u64,
    pub phi_decrements: u64,
    pub queue_ops: u64,
    pub scans: u64,
    pub samples: u64,
}

impl WorkCounter {
    #[inline]
    pub fn add(&mut self, kind: WorkKind, amount: u64) {
        let slot = match kind {
            WorkKind::Update => &mut self.updates,
            WorkKind::Transfer => &mut self.transfers,
            WorkKind::PhiIncrement => &mut self.phi_increments,
            WorkKind::PhiDecrement => &mut self.phi_decrements,
            WorkKind::QueueOp => &mut self.queue_ops,
            WorkKind::Scan => &mut self.scans,
            WorkKind::Sample => &mut self.samples,
        };
        *slot += amount;
    }

    pub fn total(&self) -> u64 {
        self.updates
            + self.transfers
            + self.phi_increments
            + self.phi_decrements
            + self.queue_ops
            + self.scans
            + self.samples
    }

    /// Everything except rise-potential decrements, whose total is bounded by
    /// the increments.
    pub fn without_decrements(&self) -> u64 {
        self.total() - self.phi_decrements
    }

    /// Field-wise `self - earlier`.
    pub fn since(&self, earlier: &WorkCounter) -> WorkCounter {
        WorkCounter {
            updates: self.updates - earlier.updates,
            transfers: self.transfers - earlier.transfers,
            phi_increments: self.phi_increments - earlier.phi_increments,
            phi_decrements: self.phi_decrements - earlier.phi_decrements,
            queue_ops: self.queue_ops - earlier.queue_ops,
            scans: self.scans - earlier.scans,
            samples: self.samples - earlier.samples,
        }
    }

    /// Decrement total never exceeds increment total.
    pub fn phi_balanced(&self) -> bool {
        self.phi_decrements <= self.phi_increments
    }
}

pub type EpochId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EpochCause {
    Alive,
    Natural,
    Induced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpochRecord {
    pub edge: EdgeKey,
    pub level: i32,
    pub initiator: VertexId,
    /// Edges owned by the initiator when it picked its mate.
    pub owned_at_init: usize,
    /// Whether the mate was drawn at random from the initiator's owned edges.
    pub random_mate: bool,
    pub start_tick: u64,
    pub end_tick: Option<u64>,
    pub cause: EpochCause,
    /// Elementary operations attributed to this epoch itself.
    pub work: u64,
    /// For induced epochs: the epoch whose creation ended this one.
    pub parent: Option<EpochId>,
    /// Deletions of initially owned edges, still owned by the initiator,
    /// while the epoch was live. Includes the deletion of the matched edge.
    pub duration: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct LevelEpochStats {
    pub level: i32,
    pub natural: u64,
    pub induced: u64,
    pub alive: u64,
    /// Deletions whose level (larger endpoint level, before repair) is `level`.
    pub deletions: u64,
    /// Mean duration over natural epochs with a random mate.
    pub mean_duration: f64,
    pub work: u64,
    pub max_work: u64,
}

#[derive(Clone, Debug, Default)]
pub struct EpochLedger {
    records: Vec<EpochRecord>,
    live: Vec<Option<EpochId>>,
    init_sets: HashMap<EpochId, HashSet<EdgeKey>>,
    orphans: Vec<EpochId>,
    deletions_by_level: HashMap<i32, u64>,
    attributed: HashMap<EdgeOccurrence, EpochId>,
    disjointness_violations: u64,
    tick: u64,
}

impl EpochLedger {
    pub fn new(n: usize) -> Self {
        EpochLedger {
            live: vec![None; n],
            ..Default::default()
        }
    }

    /// Current update index.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn advance(&mut self) {
        self.tick += 1;
    }

    pub fn live_epoch(&self, v: VertexId) -> Option<EpochId> {
        self.live[v.index()]
    }

    pub fn record(&self, id: EpochId) -> &EpochRecord {
        &self.records[id]
    }

    pub fn records(&self) -> &[EpochRecord] {
        &self.records
    }

    /// Opens an epoch for `edge`, initiated by one of its endpoints.
    ///
    /// `init_edges` is the initiator's owned set at the moment of selection;
    /// pass it only for random-mate epochs, whose durations are tracked.
    /// Induced epochs ended since the last start are linked to this one.
    pub fn epoch_started<I>(
        &mut self,
        initiator: VertexId,
        edge: EdgeKey,
        level: i32,
        owned_at_init: usize,
        init_edges: Option<I>,
    ) -> Result<EpochId, EpochError>
    where
        I: IntoIterator<Item = EdgeKey>,
    {
        let mate = edge.other(initiator);
        for v in [initiator, mate] {
            if self.live[v.index()].is_some() {
                return Err(EpochError::AlreadyLive(v));
            }
        }
        let id = self.records.len();
        let random_mate = init_edges.is_some();
        if let Some(edges) = init_edges {
            self.init_sets.insert(id, edges.into_iter().collect());
        }
        self.records.push(EpochRecord {
            edge,
            level,
            initiator,
            owned_at_init,
            random_mate,
            start_tick: self.tick,
            end_tick: None,
            cause: EpochCause::Alive,
            work: 0,
            parent: None,
            duration: 0,
        });
        self.live[initiator.index()] = Some(id);
        self.live[mate.index()] = Some(id);
        for orphan in self.orphans.drain(..) {
            self.records[orphan].parent = Some(id);
        }
        Ok(id)
    }

    pub fn epoch_ended(&mut self, id: EpochId, cause: EpochCause) -> Result<(), EpochError> {
        let rec = self.records.get_mut(id).ok_or(EpochError::NotLive(id))?;
        if rec.cause != EpochCause::Alive || cause == EpochCause::Alive {
            return Err(EpochError::NotLive(id));
        }
        rec.cause = cause;
        rec.end_tick = Some(self.tick);
        let (a, b) = rec.edge.endpoints();
        self.live[a.index()] = None;
        self.live[b.index()] = None;
        self.init_sets.remove(&id);
        if cause == EpochCause::Induced {
            self.orphans.push(id);
        }
        Ok(())
    }

    /// Ends the live epoch of `v`, if any.
    pub fn end_at(
        &mut self,
        v: VertexId,
        cause: EpochCause,
    ) -> Result<Option<EpochId>, EpochError> {
        match self.live[v.index()] {
            Some(id) => self.epoch_ended(id, cause).map(|_| Some(id)),
            None => Ok(None),
        }
    }

    pub fn charge(&mut self, id: EpochId, amount: u64) {
        self.records[id].work += amount;
    }

    /// Records a deletion before the maintainer repairs its structures.
    ///
    /// `owner` is the endpoint owning the edge at deletion time (`None` when
    /// ownership is shared). The deletion extends the duration of the owner's
    /// live epoch when the owner initiated it and owned the edge at its start.
    pub fn on_edge_deleted(
        &mut self,
        occurrence: EdgeOccurrence,
        owner: Option<VertexId>,
        level: i32,
    ) {
        *self.deletions_by_level.entry(level).or_insert(0) += 1;
        let Some(owner) = owner else { return };
        let Some(id) = self.live[owner.index()] else {
            return;
        };
        if self.records[id].initiator != owner {
            return;
        }
        let counted = self
            .init_sets
            .get(&id)
            .is_some_and(|set| set.contains(&occurrence.key));
        if counted {
            self.records[id].duration += 1;
            if self.attributed.insert(occurrence, id).is_some() {
                self.disjointness_violations += 1;
            }
        }
    }

    /// Occurrences attributed to more than one epoch. Always zero when every
    /// edge has a single owner.
    pub fn disjointness_violations(&self) -> u64 {
        self.disjointness_violations
    }

    pub fn deletions_at(&self, level: i32) -> u64 {
        self.deletions_by_level.get(&level).copied().unwrap_or(0)
    }

    pub fn alive(&self) -> impl Iterator<Item = (EpochId, &EpochRecord)> {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.cause == EpochCause::Alive)
    }

    /// Own work plus the charged cost of every induced epoch this one ended.
    pub fn charged_costs(&self) -> Vec<u64> {
        let mut charged = vec![0u64; self.records.len()];
        for (id, rec) in self.records.iter().enumerate() {
            charged[id] += rec.work;
            if let Some(p) = rec.parent {
                debug_assert!(p > id);
                charged[p] += charged[id];
            }
        }
        charged
    }

    pub fn level_epoch_stats(&self, level: i32) -> LevelEpochStats {
        let mut s = LevelEpochStats {
            level,
            deletions: self.deletions_at(level),
            ..Default::default()
        };
        let mut duration_sum = 0u64;
        let mut duration_count = 0u64;
        for rec in self.records.iter().filter(|r| r.level == level) {
            match rec.cause {
                EpochCause::Natural => {
                    s.natural += 1;
                    if rec.random_mate {
                        duration_sum += rec.duration as u64;
                        duration_count += 1;
                    }
                }
                EpochCause::Induced => s.induced += 1,
                EpochCause::Alive => s.alive += 1,
            }
            s.work += rec.work;
            s.max_work = s.max_work.max(rec.work);
        }
        if duration_count > 0 {
            s.mean_duration = duration_sum as f64 / duration_count as f64;
        }
        s
    }

    /// Levels that saw an epoch or a deletion, ascending.
    pub fn active_levels(&self) -> Vec<i32> {
        let mut levels: Vec<i32> = self
            .records
            .iter()
            .map(|r| r.level)
            .chain(self.deletions_by_level.keys().copied())
            .collect();
        levels.sort_unstable();
        levels.dedup();
        levels
    }
}
