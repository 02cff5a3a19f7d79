//! Workload generators. All of them are deterministic in their seed.

use std::collections::HashMap;

use crate::error::StreamError;
use crate::graph::{EdgeKey, VertexId};
use crate::rng::SeededSource;

use super::stream::{Op, Update, UpdateStream};

/// Live edge set with uniform sampling and O(1) removal.
#[derive(Default)]
struct EdgePool {
    edges: Vec<EdgeKey>,
    index: HashMap<EdgeKey, usize>,
}

impl EdgePool {
    fn len(&self) -> usize {
        self.edges.len()
    }

    fn contains(&self, e: &EdgeKey) -> bool {
        self.index.contains_key(e)
    }

    fn insert(&mut self, e: EdgeKey) {
        self.index.insert(e, self.edges.len());
        self.edges.push(e);
    }

    fn remove_at(&mut self, i: usize) -> EdgeKey {
        let e = self.edges.swap_remove(i);
        self.index.remove(&e);
        if let Some(&moved) = self.edges.get(i) {
            self.index.insert(moved, i);
        }
        e
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Uniformly random absent pair; assumes at least one exists.
fn absent_pair(n: usize, pool: &EdgePool, src: &mut SeededSource) -> EdgeKey {
    let total = pair_count(n);
    if 4 * pool.len() < 3 * total {
        loop {
            let u = src.below(n);
            let v = src.below(n);
            if let Some(e) = EdgeKey::new(VertexId::from(u), VertexId::from(v)) {
                if !pool.contains(&e) {
                    return e;
                }
            }
        }
    }
    let free: Vec<EdgeKey> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter_map(|(u, v)| EdgeKey::new(VertexId::from(u), VertexId::from(v)))
        .filter(|e| !pool.contains(e))
        .collect();
    free[src.below(free.len())]
}

/// Random legal stream: each step inserts a uniformly random absent pair with
/// probability `bias`, otherwise deletes a uniformly random live edge. The
/// first `prefill` steps always insert.
pub fn gen_stream(
    n: usize,
    t: usize,
    bias: f64,
    prefill: usize,
    seed: u64,
) -> Result<UpdateStream, StreamError> {
    if n == 0 {
        return Err(StreamError::Infeasible(
            "a stream needs at least one vertex".into(),
        ));
    }
    if !(bias > 0.0 && bias <= 1.0) {
        return Err(StreamError::Infeasible(format!(
            "insert bias {bias} outside (0, 1]"
        )));
    }
    let total = pair_count(n);
    if t > 0 && total == 0 {
        return Err(StreamError::Infeasible(format!(
            "no vertex pairs on {n} vertices"
        )));
    }
    if prefill > total || (bias >= 1.0 && t > total) {
        return Err(StreamError::Infeasible(format!(
            "{} insertions requested but only {total} pairs exist",
            prefill.max(t)
        )));
    }
    let mut src = SeededSource::new(seed);
    let mut pool = EdgePool::default();
    let mut updates = Vec::with_capacity(t);
    for step in 0..t {
        let insert = if pool.len() == 0 {
            true
        } else if pool.len() == total {
            false
        } else {
            step < prefill || src.chance(bias)
        };
        let up = if insert {
            let e = absent_pair(n, &pool, &mut src);
            pool.insert(e);
            Update {
                op: Op::Insert,
                u: e.lo(),
                v: e.hi(),
            }
        } else {
            let e = pool.remove_at(src.below(pool.len()));
            Update {
                op: Op::Delete,
                u: e.lo(),
                v: e.hi(),
            }
        };
        updates.push(up);
    }
    Ok(UpdateStream::new(n, updates))
}

/// [`gen_stream`] without prefill.
pub fn gen_random_stream(
    n: usize,
    t: usize,
    bias: f64,
    seed: u64,
) -> Result<UpdateStream, StreamError> {
    gen_stream(n, t, bias, 0, seed)
}

/// Builds a dense graph with `2t/5` insertions, then removes more than it adds
/// (insert bias 1/3) for the rest of the stream.
pub fn gen_deletion_heavy(n: usize, t: usize, seed: u64) -> Result<UpdateStream, StreamError> {
    gen_stream(n, t, 1.0 / 3.0, 2 * t / 5, seed)
}

/// Clique on `0..per_side`, then one pendant edge `(i, per_side + i)` per
/// clique vertex. A matching inside the clique is maximal but only half of the
/// perfect matching made of the pendants.
pub fn gen_conclusion_adversary(per_side: usize) -> Result<UpdateStream, StreamError> {
    if per_side < 2 {
        return Err(StreamError::Infeasible(format!(
            "per_side = {per_side}, need at least 2"
        )));
    }
    let p = per_side as u32;
    let mut updates: Vec<Update> = (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| Update::insert(i, j)))
        .collect();
    updates.extend((0..p).map(|i| Update::insert(i, p + i)));
    Ok(UpdateStream::new(2 * per_side, updates))
}

/// Star on center 0 with leaves `1..=leaves`, followed by the deletion of every
/// leaf edge in increasing leaf order.
pub fn gen_star_teardown(n: usize, leaves: u32) -> Result<UpdateStream, StreamError> {
    if leaves as usize >= n {
        return Err(StreamError::Infeasible(format!(
            "{leaves} leaves need more than {n} vertices"
        )));
    }
    let mut updates: Vec<Update> = (1..=leaves).map(|l| Update::insert(0, l)).collect();
    updates.extend((1..=leaves).map(|l| Update::delete(0, l)));
    Ok(UpdateStream::new(n, updates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_only_on_four_vertices() {
        let s = gen_random_stream(4, 6, 1.0, 3).unwrap();
        assert_eq!(s.insertions(), 6);
        assert_eq!(s.validate().unwrap().m(), 6);
        assert!(gen_random_stream(4, 7, 1.0, 3).is_err());
    }

    #[test]
    fn balanced_stream_is_legal_and_deterministic() {
        let a = gen_random_stream(20, 500, 0.5, 42).unwrap();
        a.validate().unwrap();
        assert!(a.deletions() > 0);
        assert_eq!(a, gen_random_stream(20, 500, 0.5, 42).unwrap());
        assert_ne!(a, gen_random_stream(20, 500, 0.5, 43).unwrap());
    }

    #[test]
    fn bad_parameters() {
        assert!(gen_random_stream(10, 5, 0.0, 0).is_err());
        assert!(gen_random_stream(10, 5, 1.5, 0).is_err());
        assert!(gen_random_stream(1, 1, 0.5, 0).is_err());
        assert!(gen_random_stream(1, 0, 0.5, 0).unwrap().is_empty());
    }

    #[test]
    fn deletion_heavy_shape() {
        let s = gen_deletion_heavy(64, 1000, 9).unwrap();
        s.validate().unwrap();
        assert!(s.updates[..400].iter().all(|u| u.op == Op::Insert));
        assert!(s.deletions() > 400);
    }

    #[test]
    fn adversary_shapes() {
        let s = gen_conclusion_adversary(2).unwrap();
        assert_eq!(s.n, 4);
        assert_eq!(
            s.updates,
            vec![
                Update::insert(0, 1),
                Update::insert(0, 2),
                Update::insert(1, 3)
            ]
        );
        let s = gen_conclusion_adversary(8).unwrap();
        assert_eq!(s.len(), 28 + 8);
        let g = s.validate().unwrap();
        assert_eq!(crate::matching::maximum_matching_size(&g).unwrap(), 8);
        assert!(gen_conclusion_adversary(1).is_err());
    }

    #[test]
    fn star_teardown() {
        let s = gen_star_teardown(64, 32).unwrap();
        assert_eq!(s.len(), 64);
        assert_eq!(s.validate().unwrap().m(), 0);
    }
}
