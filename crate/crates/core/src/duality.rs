//! Planar pre-duals of triangulations (the hexacarpet approximations) and
//! exact primal/dual crossing complementarity.

use crate::error::{invalid, Result};
use crate::generators::{gen_barycentric, Triangulation};
use crate::graph::{are_isomorphic, EdgeId, GraphDocument, Multigraph, TerminalSpec, VertexId};
use crate::percolation::{run_samples, Environment};

/// A dual graph together with its correspondence to the primal edges.
#[derive(Debug, Clone)]
pub struct DualMap {
    pub primal: Triangulation,
    /// Vertex `f < face_count` is primal face `f`.
    pub dual: Multigraph,
    /// Primal edge → dual edge; `None` for primal edges without a dual.
    pub edge_bijection: Vec<Option<EdgeId>>,
    /// The two auxiliary vertices splitting the outer face, if present.
    pub outer_arc_vertices: Option<(VertexId, VertexId)>,
}

impl DualMap {
    pub fn face_count(&self) -> usize {
        self.primal.faces().len()
    }

    /// Export as a hexacarpet document. Terminals are the faces touching
    /// corner `v0` against those touching `v1` (empty at level 0).
    pub fn to_document(&self, dual_of: &str) -> GraphDocument {
        let [c0, c1, _] = self.primal.corners();
        let touching = |c: VertexId| -> Vec<VertexId> {
            (0..self.face_count())
                .filter(|&f| self.primal.faces()[f].contains(&c))
                .collect()
        };
        let side_a = touching(c0);
        let side_b: Vec<_> = touching(c1)
            .into_iter()
            .filter(|f| !side_a.contains(f))
            .collect();
        let mut doc = GraphDocument::with_sides(
            "hexacarpet",
            self.primal.level(),
            &self.dual,
            side_a,
            side_b,
        );
        doc.dual_of = Some(dual_of.to_owned());
        doc
    }
}

/// Dual over bounded faces only. Dual edges follow primal interior edges in
/// primal edge order.
pub fn pre_dual(t: &Triangulation) -> Result<DualMap> {
    if t.faces().is_empty() {
        return invalid("pre-dual needs a triangulation with faces");
    }
    let mut dual = Multigraph::new(t.faces().len());
    let mut edge_bijection = vec![None; t.graph().edge_count()];
    for (e, faces) in t.edge_faces().iter().enumerate() {
        if let [f, g] = faces[..] {
            edge_bijection[e] = Some(dual.add_edge(f, g)?);
        }
    }
    Ok(DualMap {
        primal: t.clone(),
        dual,
        edge_bijection,
        outer_arc_vertices: None,
    })
}

/// `H_level`, generated as the pre-dual of `T_level`.
pub fn hexacarpet(level: u32) -> Result<DualMap> {
    pre_dual(&gen_barycentric(level)?)
}

/// Boundary edges on the counter-clockwise boundary walk from `s` to `u`.
fn arc_from(t: &Triangulation, s: VertexId, u: VertexId) -> Result<Vec<EdgeId>> {
    let n = t.graph().vertex_count();
    let mut next: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    for (f, sides) in t.face_edges().iter().enumerate() {
        let [a, b, c] = t.faces()[f];
        for (i, &e) in sides.iter().enumerate() {
            if t.is_boundary_edge(e) {
                let (from, to) = [(a, b), (b, c), (c, a)][i];
                next[from] = Some((to, e));
            }
        }
    }
    let mut arc = Vec::new();
    let mut at = s;
    while at != u {
        let Some((to, e)) = next[at] else {
            return invalid(format!("vertex {at} is not on the boundary"));
        };
        arc.push(e);
        at = to;
        if arc.len() > t.boundary_edges().len() {
            return invalid("boundary walk did not reach the target corner");
        }
    }
    Ok(arc)
}

/// Full planar dual with the outer face split at corners `s` and `u`.
///
/// The dual has the faces plus two arc vertices: `F` for the boundary arc
/// walked counter-clockwise from `s` to `u`, `F + 1` for the arc from `u`
/// back to `s`. Dual edge `e` crosses primal edge `e`.
pub fn dual_with_arcs(t: &Triangulation, s: VertexId, u: VertexId) -> Result<DualMap> {
    let corners = t.corners();
    if !corners.contains(&s) || !corners.contains(&u) {
        return invalid(format!("arc endpoints {s}, {u} must be corners"));
    }
    if s == u {
        return invalid("arc endpoints must differ");
    }
    let faces = t.faces().len();
    let (arc_a, arc_b) = (faces, faces + 1);
    let mut on_arc_a = vec![false; t.graph().edge_count()];
    for e in arc_from(t, s, u)? {
        on_arc_a[e] = true;
    }
    let mut dual = Multigraph::new(faces + 2);
    let mut edge_bijection = Vec::with_capacity(t.graph().edge_count());
    for (e, fs) in t.edge_faces().iter().enumerate() {
        let d = match fs[..] {
            [f, g] => dual.add_edge(f, g)?,
            [f] => dual.add_edge(f, if on_arc_a[e] { arc_a } else { arc_b })?,
            _ => unreachable!("triangulation edges border one or two faces"),
        };
        edge_bijection.push(Some(d));
    }
    Ok(DualMap {
        primal: t.clone(),
        dual,
        edge_bijection,
        outer_arc_vertices: Some((arc_a, arc_b)),
    })
}

/// Outcome of one primal/dual crossing evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingPair {
    /// Open `s`–`u` path in the primal.
    pub primal_open: bool,
    /// Arc-to-arc path of duals of closed primal edges.
    pub dual_closed: bool,
}

impl CrossingPair {
    pub fn exactly_one(&self) -> bool {
        self.primal_open ^ self.dual_closed
    }
}

/// Reusable primal/dual pair for repeated complementarity checks.
#[derive(Debug, Clone)]
pub struct Complementarity {
    map: DualMap,
    primal_terminals: TerminalSpec,
    dual_terminals: TerminalSpec,
}

impl Complementarity {
    pub fn new(t: &Triangulation, s: VertexId, u: VertexId) -> Result<Self> {
        let map = dual_with_arcs(t, s, u)?;
        let (a, b) = map.outer_arc_vertices.expect("arcs present");
        Ok(Self {
            primal_terminals: TerminalSpec::pair(s, u)?,
            dual_terminals: TerminalSpec::pair(a, b)?,
            map,
        })
    }

    pub fn dual_map(&self) -> &DualMap {
        &self.map
    }

    pub fn primal_terminals(&self) -> &TerminalSpec {
        &self.primal_terminals
    }

    pub fn dual_terminals(&self) -> &TerminalSpec {
        &self.dual_terminals
    }

    /// Evaluates both crossings for a per-edge open mask.
    pub fn evaluate(&self, open: &[bool]) -> Result<CrossingPair> {
        let g = self.map.primal.graph();
        if open.len() != g.edge_count() {
            return invalid("open mask length differs from edge count");
        }
        let primal_open = crate::graph::connected(
            g,
            (0..open.len()).filter(|&e| open[e]),
            &self.primal_terminals,
        )?;
        let closed_duals = (0..open.len())
            .filter(|&e| !open[e])
            .filter_map(|e| self.map.edge_bijection[e]);
        let dual_closed =
            crate::graph::connected(&self.map.dual, closed_duals, &self.dual_terminals)?;
        Ok(CrossingPair {
            primal_open,
            dual_closed,
        })
    }
}

/// Whether exactly one of (open primal `s`–`u` path, closed dual arc-to-arc
/// path) occurs.
pub fn complementarity_check(
    t: &Triangulation,
    s: VertexId,
    u: VertexId,
    open_edges: &[EdgeId],
) -> Result<bool> {
    let c = Complementarity::new(t, s, u)?;
    let mut mask = vec![false; t.graph().edge_count()];
    for &e in open_edges {
        t.graph().check_edge(e)?;
        mask[e] = true;
    }
    Ok(c.evaluate(&mask)?.exactly_one())
}

/// Tally of complementarity evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XorTally {
    pub held: u64,
    pub total: u64,
    /// Environments on which every evaluation held.
    pub environments_held: u64,
    pub environments: u64,
}

impl XorTally {
    pub fn passed(&self) -> bool {
        self.held == self.total
    }
}

/// Evaluates complementarity on every subset of the edges of `t`
/// (at most 20 edges).
pub fn complementarity_exhaustive(t: &Triangulation, s: VertexId, u: VertexId) -> Result<XorTally> {
    let edges = t.graph().edge_count();
    if edges > 20 {
        return invalid(format!(
            "exhaustive check limited to 20 edges (got {edges})"
        ));
    }
    let c = Complementarity::new(t, s, u)?;
    let mut held = 0;
    for bits in 0u64..(1 << edges) {
        let open: Vec<bool> = (0..edges).map(|e| bits >> e & 1 == 1).collect();
        held += u64::from(c.evaluate(&open)?.exactly_one());
    }
    let total = 1u64 << edges;
    Ok(XorTally {
        held,
        total,
        environments_held: held,
        environments: total,
    })
}

/// Evaluates complementarity between corners `v0` and `v1` of `T_level` on
/// `samples` uniform environments, at every density of `p_grid`.
pub fn complementarity_sampled(
    level: u32,
    samples: u64,
    seed: u64,
    p_grid: &[f64],
    workers: usize,
) -> Result<XorTally> {
    if samples == 0 || p_grid.is_empty() {
        return invalid("need samples >= 1 and a nonempty p grid");
    }
    let t = gen_barycentric(level)?;
    let [s, u, _] = t.corners();
    let c = Complementarity::new(&t, s, u)?;
    let edges = t.graph().edge_count();
    let per_env = run_samples(samples, workers, |i| {
        let env = Environment::new(seed, i, edges);
        let mut held = 0u64;
        for &p in p_grid {
            held += u64::from(c.evaluate(&env.open_mask(p))?.exactly_one());
        }
        Ok(held)
    })?;
    let k = p_grid.len() as u64;
    Ok(XorTally {
        held: per_env.iter().sum(),
        total: samples * k,
        environments_held: per_env.iter().filter(|&&h| h == k).count() as u64,
        environments: samples,
    })
}

/// The six blocks of `H_level` descending from the six level-one faces,
/// each as an induced subgraph on faces `c*6^(level-1) .. (c+1)*6^(level-1)`.
pub fn ring_blocks(h: &DualMap) -> Result<Vec<Multigraph>> {
    let level = h.primal.level();
    if level == 0 {
        return invalid("H_0 has no ring decomposition");
    }
    let block = 6usize.pow(level - 1);
    (0..6)
        .map(|c| {
            let vs: Vec<VertexId> = (c * block..(c + 1) * block).collect();
            h.dual.induced_subgraph(&vs)
        })
        .collect()
}

/// Checks that `H_level` splits into six vertex-disjoint copies of
/// `H_{level-1}`.
pub fn verify_ring_structure(level: u32) -> Result<bool> {
    let h = hexacarpet(level)?;
    let smaller = hexacarpet(level - 1)?;
    for b in ring_blocks(&h)? {
        if !are_isomorphic(&b, &smaller.dual)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interior_edges(t: &Triangulation) -> usize {
        t.edge_faces().iter().filter(|f| f.len() == 2).count()
    }

    #[test]
    fn hexagon_and_counts() {
        let h0 = hexacarpet(0).unwrap();
        assert_eq!((h0.dual.vertex_count(), h0.dual.edge_count()), (1, 0));
        let h1 = hexacarpet(1).unwrap();
        assert_eq!((h1.dual.vertex_count(), h1.dual.edge_count()), (6, 6));
        assert!(h1.dual.degrees().iter().all(|&d| d == 2));
        let h2 = hexacarpet(2).unwrap();
        let t2 = gen_barycentric(2).unwrap();
        assert_eq!(interior_edges(&t2), 48);
        assert_eq!((h2.dual.vertex_count(), h2.dual.edge_count()), (36, 48));
    }

    #[test]
    fn closed_form_counts_and_degree() {
        for level in 0..=5u32 {
            let h = hexacarpet(level).unwrap();
            let f = 6usize.pow(level);
            assert_eq!(h.dual.vertex_count(), f);
            assert_eq!(h.dual.edge_count(), 3 * (f - (1 << level)) / 2);
            assert!(h.dual.degrees().iter().all(|&d| d <= 3));
        }
    }

    #[test]
    fn arcs_small_levels() {
        let t0 = gen_barycentric(0).unwrap();
        let d0 = dual_with_arcs(&t0, 0, 1).unwrap();
        assert_eq!((d0.dual.vertex_count(), d0.dual.edge_count()), (3, 3));
        let t1 = gen_barycentric(1).unwrap();
        let d1 = dual_with_arcs(&t1, 0, 1).unwrap();
        assert_eq!((d1.dual.vertex_count(), d1.dual.edge_count()), (8, 12));
        // Arc from v0 to v1 holds the two halves of the bottom side.
        let (a, b) = d1.outer_arc_vertices.unwrap();
        let deg = d1.dual.degrees();
        assert_eq!((deg[a], deg[b]), (2, 4));
    }

    #[test]
    fn arc_guards() {
        let t1 = gen_barycentric(1).unwrap();
        assert!(dual_with_arcs(&t1, 0, 0).is_err());
        assert!(dual_with_arcs(&t1, 0, 6).is_err());
    }

    #[test]
    fn pre_dual_is_arc_dual_minus_arcs() {
        for level in 0..=3 {
            let t = gen_barycentric(level).unwrap();
            let pre = pre_dual(&t).unwrap();
            let full = dual_with_arcs(&t, t.corners()[0], t.corners()[2]).unwrap();
            let faces: Vec<usize> = (0..t.faces().len()).collect();
            let stripped = full.dual.induced_subgraph(&faces).unwrap();
            assert!(are_isomorphic(&stripped, &pre.dual).unwrap());
        }
    }

    #[test]
    fn exhaustive_level_one() {
        let t1 = gen_barycentric(1).unwrap();
        let c = Complementarity::new(&t1, 0, 1).unwrap();
        for bits in 0u32..(1 << 12) {
            let open: Vec<bool> = (0..12).map(|e| bits >> e & 1 == 1).collect();
            let pair = c.evaluate(&open).unwrap();
            assert!(pair.exactly_one(), "subset {bits:#014b}");
        }
        assert!(complementarity_check(&t1, 0, 1, &(0..12).collect::<Vec<_>>()).unwrap());
        assert!(complementarity_check(&t1, 0, 1, &[]).unwrap());
    }

    #[test]
    fn tallies() {
        let t1 = gen_barycentric(1).unwrap();
        let x = complementarity_exhaustive(&t1, 1, 2).unwrap();
        assert_eq!((x.held, x.total), (4096, 4096));
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let y = complementarity_sampled(2, 200, 3, &grid, 2).unwrap();
        assert!(y.passed());
        assert_eq!((y.total, y.environments_held), (200 * 21, 200));
        assert!(complementarity_exhaustive(&gen_barycentric(2).unwrap(), 0, 1).is_err());
    }

    #[test]
    fn ring_structure() {
        for level in 1..=3 {
            assert!(verify_ring_structure(level).unwrap());
        }
    }
}
