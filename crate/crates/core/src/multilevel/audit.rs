use crate::error::AuditViolation;
use crate::graph::VertexId;
use crate::matching::{check_maximal, verify_matching};

use super::Multilevel;

fn fail<T>(msg: String) -> Result<T, AuditViolation> {
    Err(AuditViolation(msg))
}

impl Multilevel {
    /// Recomputes every invariant from scratch: matching validity, levels and
    /// matched status, single ownership directed upwards, incidence sets,
    /// every stored potential, the potential bound, empty queues and
    /// maximality.
    pub fn audit_invariants(&self) -> Result<(), AuditViolation> {
        self.graph.audit()?;
        if !verify_matching(&self.graph, &self.matching) {
            return fail("matching is not valid for the graph".into());
        }
        if self.has_pending() {
            return fail("free-vertex queue not empty between updates".into());
        }

        for v in self.graph.vertices() {
            let l = self.lvl(v);
            if !(-1..=self.top).contains(&l) {
                return fail(format!(
                    "vertex {v} on level {l} outside [-1, {}]",
                    self.top
                ));
            }
            match self.matching.mate(v) {
                None if l >= 0 => return fail(format!("free vertex {v} on level {l}")),
                Some(w) if l < 0 => return fail(format!("vertex {v} on level -1 matched to {w}")),
                Some(w) if self.lvl(w) != l => {
                    return fail(format!(
                        "matched pair {v}-{w} spans levels {l} and {}",
                        self.lvl(w)
                    ))
                }
                _ => {}
            }
            if l < 0 && !self.owned[v.index()].is_empty() {
                return fail(format!("vertex {v} on level -1 owns edges"));
            }
        }

        let mut owned_total = 0usize;
        let mut incident_total = 0usize;
        for e in self.graph.edges() {
            let (a, b) = e.endpoints();
            let (owner, other) = match (
                self.owned[a.index()].contains(&b),
                self.owned[b.index()].contains(&a),
            ) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                (true, true) => return fail(format!("edge {e} owned by both endpoints")),
                (false, false) => return fail(format!("edge {e} has no owner")),
            };
            if self.lvl(owner) < self.lvl(other) {
                return fail(format!(
                    "edge {e} owned by {owner} on level {} below {other} on level {}",
                    self.lvl(owner),
                    self.lvl(other)
                ));
            }
            let slot = self.e_slot(other, self.lvl(owner));
            if !self.incident[slot].contains(&owner) {
                return fail(format!(
                    "edge {e} missing from the level-{} incidence set of {other}",
                    self.lvl(owner)
                ));
            }
            owned_total += 1;
            incident_total += 1;
        }
        let stored_owned: usize = self.owned.iter().map(|s| s.len()).sum();
        let stored_incident: usize = self.incident.iter().map(|s| s.len()).sum();
        if stored_owned != owned_total || stored_incident != incident_total {
            return fail(format!(
                "ownership or incidence sets hold stale edges ({stored_owned}/{owned_total}, \
                 {stored_incident}/{incident_total})"
            ));
        }

        for v in self.graph.vertices() {
            self.audit_phi(v)?;
        }

        if let Some(e) = check_maximal(&self.graph, &self.matching).witness {
            return fail(format!("edge {e} has two free endpoints"));
        }
        Ok(())
    }

    fn audit_phi(&self, v: VertexId) -> Result<(), AuditViolation> {
        let l = self.lvl(v);
        let mut running = self.owned[v.index()].len() as u64;
        for k in -1..l {
            if !self.incident[self.e_slot(v, k)].is_empty() {
                return fail(format!(
                    "vertex {v} on level {l} has an owner below it on level {k}"
                ));
            }
        }
        for j in 0..=self.top {
            let expected = if j > l {
                running += self.incident[self.e_slot(v, j - 1)].len() as u64;
                running
            } else {
                0
            };
            let stored = self.phi(v, j) as u64;
            if stored != expected {
                return fail(format!(
                    "phi of {v} at level {j} is {stored}, recomputed {expected}"
                ));
            }
            if j > l && stored >= 1u64 << j {
                return fail(format!(
                    "vertex {v} on level {l} can rise: phi({j}) = {stored}"
                ));
            }
        }
        Ok(())
    }
}
