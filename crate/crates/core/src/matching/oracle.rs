//! Exact maximum-cardinality matching, by two independent routes.
//!
//! `maximum_matching_blossom` is Edmonds' augmenting-path search with blossom
//! contraction, O(n^3). `maximum_matching_by_search` is a branch-and-bound
//! enumeration over vertex bitmasks, only usable for small graphs. Neither
//! looks at the state of any maintainer.

use std::collections::VecDeque;

use crate::error::OracleError;
use crate::graph::DynamicGraph;

/// Default size bound for [`maximum_matching_size`].
pub const DEFAULT_ORACLE_BOUND: usize = 256;

/// Largest vertex count accepted by the branch-and-bound search.
pub const SEARCH_ORACLE_BOUND: usize = 24;

/// Maximum matching size of `g`, refusing graphs above [`DEFAULT_ORACLE_BOUND`].
pub fn maximum_matching_size(g: &DynamicGraph) -> Result<usize, OracleError> {
    if g.n() > DEFAULT_ORACLE_BOUND {
        return Err(OracleError::TooLarge {
            n: g.n(),
            bound: DEFAULT_ORACLE_BOUND,
        });
    }
    Ok(maximum_matching_blossom(g))
}

fn adjacency_lists(g: &DynamicGraph) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = g
        .vertices()
        .map(|u| g.neighbors(u).map(|v| v.index()).collect())
        .collect();
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches an augmenting path from the free vertex `root`; returns its far end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn solve(mut self) -> usize {
        let n = self.adj.len();
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&u) = self.adj[v].iter().find(|&&u| self.mate[u] == NONE) {
                    self.mate[v] = u;
                    self.mate[u] = v;
                }
            }
        }
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(end) = self.find_path(v) {
                    self.augment(end);
                }
            }
        }
        self.mate.iter().filter(|&&m| m != NONE).count() / 2
    }
}

/// Edmonds' blossom algorithm; exact for general graphs.
pub fn maximum_matching_blossom(g: &DynamicGraph) -> usize {
    let adj = adjacency_lists(g);
    Blossom::new(&adj).solve()
}

/// Exhaustive branch-and-bound over vertex subsets. `None` above
/// [`SEARCH_ORACLE_BOUND`] vertices.
pub fn maximum_matching_by_search(g: &DynamicGraph) -> Option<usize> {
    let n = g.n();
    if n > SEARCH_ORACLE_BOUND {
        return None;
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|u| g.neighbors(u).fold(0u32, |acc, v| acc | (1 << v.index())))
        .collect();
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // Greedy lower bound so pruning starts immediately.
    let mut best = 0usize;
    let mut free = all;
    for u in 0..n {
        if free & (1 << u) != 0 {
            let cand = adj[u] & free;
            if cand != 0 {
                let v = cand.trailing_zeros() as usize;
                free &= !(1 << u) & !(1 << v);
                best += 1;
            }
        }
    }
    branch(&adj, all, 0, &mut best);
    Some(best)
}

fn branch(adj: &[u32], mask: u32, current: usize, best: &mut usize) {
    // Vertices without a neighbor inside the mask can never be matched.
    let mut live = mask;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if adj[v] & mask == 0 {
            live &= !(1 << v);
        }
    }
    if live == 0 {
        *best = (*best).max(current);
        return;
    }
    if current + (live.count_ones() as usize) / 2 <= *best {
        return;
    }

    // Pivot on the vertex with fewest live neighbors.
    let mut pivot = 0usize;
    let mut pivot_degree = u32::MAX;
    let mut bits = live;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let d = (adj[v] & live).count_ones();
        if d < pivot_degree {
            pivot = v;
            pivot_degree = d;
        }
    }

    let rest = live & !(1 << pivot);
    let mut nbrs = adj[pivot] & live;
    while nbrs != 0 {
        let w = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        branch(adj, rest & !(1 << w), current + 1, best);
    }
    branch(adj, rest, current, best);
}
