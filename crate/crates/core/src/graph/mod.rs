//! Multigraph storage and connectivity primitives shared by every family.

mod dsu;
mod iso;
mod json;

use std::collections::BTreeMap;

use crate::error::{invalid, Result};

pub use dsu::DisjointSet;
pub use iso::{are_isomorphic, ISO_VERTEX_LIMIT};
pub use json::GraphDocument;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected multigraph with dense vertex and edge identifiers.
///
/// Edge `i` is `edges[i]`. Parallel edges are kept; self-loops are refused.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    labels: BTreeMap<VertexId, String>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
            labels: BTreeMap::new(),
        }
    }

    /// Builds a graph from an edge list, validating every endpoint.
    pub fn from_edges(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return invalid(format!(
                "edge ({u}, {v}) references a vertex outside 0..{}",
                self.vertex_count
            ));
        }
        if u == v {
            return invalid(format!("self-loop at vertex {u}"));
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, String> {
        &self.labels
    }

    pub fn set_label(&mut self, v: VertexId, tag: impl Into<String>) {
        self.labels.insert(v, tag.into());
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    /// Vertex carrying `tag`, if any.
    pub fn vertex_by_label(&self, tag: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .find_map(|(&v, t)| (t == tag).then_some(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Incidence lists: for every vertex, `(neighbour, edge_id)` pairs in
    /// edge order.
    pub fn incidence(&self) -> Vec<Vec<(VertexId, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    /// Subgraph spanned by the given edges, keeping every vertex.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> Result<Multigraph> {
        let mut g = Multigraph::new(self.vertex_count);
        for &e in keep {
            self.check_edge(e)?;
            let (u, v) = self.edges[e];
            g.add_edge(u, v)?;
        }
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Subgraph induced by `vertices`, relabelled densely in the given order.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<Multigraph> {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        let mut g = Multigraph::new(vertices.len());
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                g.add_edge(index[u], index[v])?;
            }
        }
        Ok(g)
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.vertex_count {
            return invalid(format!("vertex {v} out of range 0..{}", self.vertex_count));
        }
        Ok(())
    }

    pub(crate) fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e >= self.edges.len() {
            return invalid(format!("edge {e} out of range 0..{}", self.edges.len()));
        }
        Ok(())
    }
}

/// Two disjoint, nonempty terminal sets between which crossings are sought.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalSpec {
    side_a: Vec<VertexId>,
    side_b: Vec<VertexId>,
}

impl TerminalSpec {
    pub fn new(side_a: Vec<VertexId>, side_b: Vec<VertexId>) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return invalid("terminal sides must be nonempty");
        }
        if side_a.iter().any(|v| side_b.contains(v)) {
            return invalid("terminal sides must be disjoint");
        }
        Ok(Self { side_a, side_b })
    }

    pub fn pair(a: VertexId, b: VertexId) -> Result<Self> {
        Self::new(vec![a], vec![b])
    }

    pub fn side_a(&self) -> &[VertexId] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[VertexId] {
        &self.side_b
    }

    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        self.side_a
            .iter()
            .chain(&self.side_b)
            .try_for_each(|&v| g.check_vertex(v))
    }

    /// Image of the terminals under a vertex map. Fails if the sides collide.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Result<Self> {
        let mut a: Vec<_> = self.side_a.iter().map(|&v| f(v)).collect();
        let mut b: Vec<_> = self.side_b.iter().map(|&v| f(v)).collect();
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        Self::new(a, b)
    }

    /// Disjoint-set state over `g` with each side pre-merged, plus the two
    /// representatives to compare. A union path between the merged sides
    /// always contains a real path from some `a` to some `b`.
    pub(crate) fn seeded_dsu(&self, vertex_count: usize) -> (DisjointSet, VertexId, VertexId) {
        let mut dsu = DisjointSet::new(vertex_count);
        let a0 = self.side_a[0];
        let b0 = self.side_b[0];
        for &a in &self.side_a[1..] {
            dsu.union(a0, a);
        }
        for &b in &self.side_b[1..] {
            dsu.union(b0, b);
        }
        (dsu, a0, b0)
    }
}

/// Whether some path of open edges joins a vertex of `side_a` to one of
/// `side_b`.
pub fn connected(
    g: &Multigraph,
    open_edges: impl IntoIterator<Item = EdgeId>,
    t: &TerminalSpec,
) -> Result<bool> {
    t.validate(g)?;
    let (mut dsu, a, b) = t.seeded_dsu(g.vertex_count());
    for e in open_edges {
        g.check_edge(e)?;
        let (u, v) = g.endpoints(e);
        dsu.union(u, v);
    }
    Ok(dsu.same(a, b))
}

/// Same as [`connected`] with the open set given as a per-edge mask.
pub fn connected_mask(g: &Multigraph, open: &[bool], t: &TerminalSpec) -> Result<bool> {
    if open.len() != g.edge_count() {
        return invalid(format!(
            "open mask has {} entries for {} edges",
            open.len(),
            g.edge_count()
        ));
    }
    connected(
        g,
        open.iter().enumerate().filter_map(|(e, &o)| o.then_some(e)),
        t,
    )
}

/// Quotient by a vertex partition given as explicit classes. Class `i`
/// becomes vertex `i`; every edge keeps its id.
pub fn quotient(g: &Multigraph, classes: &[Vec<VertexId>]) -> Result<Multigraph> {
    let mut class_of = vec![usize::MAX; g.vertex_count()];
    for (c, members) in classes.iter().enumerate() {
        if members.is_empty() {
            return invalid(format!("class {c} is empty"));
        }
        for &v in members {
            g.check_vertex(v)?;
            if class_of[v] != usize::MAX {
                return invalid(format!("vertex {v} appears in more than one class"));
            }
            class_of[v] = c;
        }
    }
    if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
        return invalid(format!("vertex {v} is not covered by the partition"));
    }
    quotient_by_map(g, &class_of, classes.len())
}

/// Quotient by a vertex → class map with classes `0..class_count`.
pub fn quotient_by_map(
    g: &Multigraph,
    class_of: &[usize],
    class_count: usize,
) -> Result<Multigraph> {
    if class_of.len() != g.vertex_count() {
        return invalid("class map length differs from vertex count");
    }
    if let Some(&c) = class_of.iter().find(|&&c| c >= class_count) {
        return invalid(format!("class {c} out of range 0..{class_count}"));
    }
    let mut q = Multigraph::new(class_count);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (cu, cv) = (class_of[u], class_of[v]);
        if cu == cv {
            return invalid(format!(
                "quotient collapses edge {e} ({u}, {v}) into a self-loop"
            ));
        }
        q.add_edge(cu, cv)?;
    }
    for (&v, tag) in g.labels() {
        q.labels.entry(class_of[v]).or_insert_with(|| tag.clone());
    }
    debug_assert_eq!(q.edge_count(), g.edge_count());
    Ok(q)
}
