//! Multigraph isomorphism by colour refinement and individualisation.
//!
//! Only used for generator cross-checks on graphs of a few hundred vertices.

use std::collections::HashMap;

use super::{Multigraph, VertexId};
use crate::error::{capability, Result};

/// Largest vertex count accepted by [`are_isomorphic`].
pub const ISO_VERTEX_LIMIT: usize = 10_000;

const SEARCH_BUDGET: usize = 200_000;

/// Whether a vertex bijection preserving edge multiplicities exists.
pub fn are_isomorphic(g1: &Multigraph, g2: &Multigraph) -> Result<bool> {
    if g1.vertex_count() > ISO_VERTEX_LIMIT || g2.vertex_count() > ISO_VERTEX_LIMIT {
        return capability(format!(
            "isomorphism check limited to {ISO_VERTEX_LIMIT} vertices"
        ));
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let mut d1 = g1.degrees();
    let mut d2 = g2.degrees();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(false);
    }
    let mut search = Search::new(g1, g2);
    let colours = vec![0u32; search.n * 2];
    let Some(colours) = search.refine(colours) else {
        return Ok(false);
    };
    match search.descend(colours) {
        Some(found) => Ok(found),
        None => capability("isomorphism search budget exhausted"),
    }
}

/// Disjoint union of both graphs: vertices `0..n` are `g1`, `n..2n` are `g2`.
struct Search<'a> {
    n: usize,
    adj: Vec<Vec<(VertexId, u32)>>,
    g1: &'a Multigraph,
    g2: &'a Multigraph,
    steps: usize,
}

fn weighted_adjacency(g: &Multigraph, offset: usize, adj: &mut [Vec<(VertexId, u32)>]) {
    let mut mult: HashMap<(VertexId, VertexId), u32> = HashMap::new();
    for &(u, v) in g.edges() {
        let key = (u.min(v), u.max(v));
        *mult.entry(key).or_default() += 1;
    }
    let mut pairs: Vec<_> = mult.into_iter().collect();
    pairs.sort_unstable();
    for ((u, v), m) in pairs {
        adj[u + offset].push((v + offset, m));
        adj[v + offset].push((u + offset, m));
    }
}

impl<'a> Search<'a> {
    fn new(g1: &'a Multigraph, g2: &'a Multigraph) -> Self {
        let n = g1.vertex_count();
        let mut adj = vec![Vec::new(); 2 * n];
        weighted_adjacency(g1, 0, &mut adj);
        weighted_adjacency(g2, n, &mut adj);
        Self {
            n,
            adj,
            g1,
            g2,
            steps: 0,
        }
    }

    /// Refines to the coarsest equitable partition. Returns `None` as soon as
    /// the two halves have different colour histograms.
    fn refine(&mut self, mut colours: Vec<u32>) -> Option<Vec<u32>> {
        let mut classes = count_classes(&colours);
        loop {
            let signatures: Vec<Signature> = (0..2 * self.n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> =
                        self.adj[v].iter().map(|&(w, m)| (colours[w], m)).collect();
                    nb.sort_unstable();
                    (colours[v], nb)
                })
                .collect();
            let mut distinct: Vec<&Signature> = signatures.iter().collect();
            distinct.sort_unstable();
            distinct.dedup();
            let index: HashMap<&Signature, u32> = distinct
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i as u32))
                .collect();
            colours = signatures.iter().map(|s| index[s]).collect();
            if !self.balanced(&colours) {
                return None;
            }
            let next = distinct.len();
            if next == classes {
                return Some(colours);
            }
            classes = next;
        }
    }

    fn balanced(&self, colours: &[u32]) -> bool {
        let mut left = colours[..self.n].to_vec();
        let mut right = colours[self.n..].to_vec();
        left.sort_unstable();
        right.sort_unstable();
        left == right
    }

    /// Individualise-and-refine backtracking. `None` means the budget ran out.
    fn descend(&mut self, colours: Vec<u32>) -> Option<bool> {
        self.steps += 1;
        if self.steps > SEARCH_BUDGET {
            return None;
        }
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for &c in &colours[..self.n] {
            *sizes.entry(c).or_default() += 1;
        }
        // Smallest non-singleton class, lowest colour on ties.
        let target = sizes
            .iter()
            .filter(|&(_, &s)| s > 1)
            .min_by_key(|&(&c, &s)| (s, c))
            .map(|(&c, _)| c);
        let Some(target) = target else {
            return Some(self.verify(&colours));
        };
        let v = (0..self.n).find(|&v| colours[v] == target).unwrap();
        let fresh = colours.iter().max().copied().unwrap_or(0) + 1;
        for w in (self.n..2 * self.n).filter(|&w| colours[w] == target) {
            let mut next = colours.clone();
            next[v] = fresh;
            next[w] = fresh;
            if let Some(refined) = self.refine(next) {
                match self.descend(refined)? {
                    true => return Some(true),
                    false => continue,
                }
            }
        }
        Some(false)
    }

    fn verify(&self, colours: &[u32]) -> bool {
        let by_colour: HashMap<u32, VertexId> = colours[self.n..]
            .iter()
            .enumerate()
            .map(|(w, &c)| (c, w))
            .collect();
        let image: Vec<VertexId> = colours[..self.n].iter().map(|c| by_colour[c]).collect();
        multiplicities(self.g1, |v| image[v]) == multiplicities(self.g2, |v| v)
    }
}

/// Own colour plus the sorted multiset of (neighbour colour, multiplicity).
type Signature = (u32, Vec<(u32, u32)>);

fn count_classes(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn multiplicities(
    g: &Multigraph,
    f: impl Fn(VertexId) -> VertexId,
) -> HashMap<(VertexId, VertexId), usize> {
    let mut m = HashMap::new();
    for &(u, v) in g.edges() {
        let (a, b) = (f(u), f(v));
        *m.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    m
}
