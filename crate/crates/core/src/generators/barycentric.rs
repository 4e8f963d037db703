//! Iterated barycentric subdivision of a triangle.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::graph::{EdgeId, GraphDocument, Multigraph, TerminalSpec, VertexId};

use super::guard_power;

/// A triangulated disc: graph, oriented faces and (optionally) coordinates.
///
/// Faces are stored counter-clockwise when coordinates are present. The three
/// corner vertices of the original triangle are kept in `corners`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    graph: Multigraph,
    faces: Vec<[VertexId; 3]>,
    face_edges: Vec<[EdgeId; 3]>,
    coords: Option<Vec<[f64; 2]>>,
    boundary_edges: Vec<EdgeId>,
    corners: [VertexId; 3],
    level: u32,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

impl Triangulation {
    /// Assembles a triangulation, checking that every face side is an edge of
    /// the (simple) graph and that every edge borders one or two faces.
    pub fn new(
        graph: Multigraph,
        faces: Vec<[VertexId; 3]>,
        coords: Option<Vec<[f64; 2]>>,
        corners: [VertexId; 3],
        level: u32,
    ) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(graph.edge_count());
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            if lookup.insert(key(u, v), e).is_some() {
                return invalid(format!(
                    "triangulation graph has parallel edges at ({u}, {v})"
                ));
            }
        }
        let mut incidence = vec![0u8; graph.edge_count()];
        let mut face_edges = Vec::with_capacity(faces.len());
        for (f, &[a, b, c]) in faces.iter().enumerate() {
            let mut sides = [0; 3];
            for (i, (u, v)) in [(a, b), (b, c), (c, a)].into_iter().enumerate() {
                let Some(&e) = lookup.get(&key(u, v)) else {
                    return invalid(format!("face {f} side ({u}, {v}) is not an edge"));
                };
                sides[i] = e;
                incidence[e] += 1;
            }
            face_edges.push(sides);
        }
        if let Some(e) = incidence.iter().position(|&k| k == 0 || k > 2) {
            return invalid(format!("edge {e} borders {} faces", incidence[e]));
        }
        if let Some(c) = &coords {
            if c.len() != graph.vertex_count() {
                return invalid("coordinate count differs from vertex count");
            }
        }
        for &v in &corners {
            graph.check_vertex(v)?;
        }
        let boundary_edges = (0..graph.edge_count())
            .filter(|&e| incidence[e] == 1)
            .collect();
        Ok(Self {
            graph,
            faces,
            face_edges,
            coords,
            boundary_edges,
            corners,
            level,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn faces(&self) -> &[[VertexId; 3]] {
        &self.faces
    }

    /// Edge ids of each face side, in the order `(f0,f1), (f1,f2), (f2,f0)`.
    pub fn face_edges(&self) -> &[[EdgeId; 3]] {
        &self.face_edges
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn boundary_edges(&self) -> &[EdgeId] {
        &self.boundary_edges
    }

    pub fn corners(&self) -> [VertexId; 3] {
        self.corners
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Faces bordering each edge, in ascending face order.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(2); self.graph.edge_count()];
        for (f, sides) in self.face_edges.iter().enumerate() {
            for &e in sides {
                out[e].push(f);
            }
        }
        out
    }

    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        self.boundary_edges.binary_search(&e).is_ok()
    }

    /// Edge id joining `u` and `v`, if any.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let target = key(u, v);
        self.graph
            .edges()
            .iter()
            .position(|&(a, b)| key(a, b) == target)
    }

    /// Euler characteristic over bounded faces, `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + self.faces.len() as i64
    }

    /// Corner-to-corner terminals `{v_i}, {v_j}`.
    pub fn corner_terminals(&self, i: usize, j: usize) -> Result<TerminalSpec> {
        if i > 2 || j > 2 {
            return invalid(format!("corner index out of range: {i}, {j}"));
        }
        TerminalSpec::pair(self.corners[i], self.corners[j])
    }

    /// Side-to-side terminals, see [`side_terminals`]. Requires coordinates.
    pub fn side_terminals(&self) -> Result<TerminalSpec> {
        let Some(coords) = &self.coords else {
            return invalid("side terminals need coordinates");
        };
        side_terminals(coords, self.corners)
    }

    /// Export in the graph exchange format with corner terminals `v0`, `v1`.
    pub fn to_document(&self, family: &str) -> GraphDocument {
        let t = TerminalSpec::pair(self.corners[0], self.corners[1]).expect("corners differ");
        let mut doc = GraphDocument::new(family, self.level, &self.graph, &t);
        doc.coords = self.coords.clone();
        doc.faces = Some(self.faces.clone());
        doc
    }
}

/// Terminals made of whole boundary sides: the vertices on the side from
/// `v0` to `v1` against those on the side from `v1` to `v2`, with the shared
/// corner `v1` left out of both.
pub fn side_terminals(coords: &[[f64; 2]], corners: [VertexId; 3]) -> Result<TerminalSpec> {
    let [c0, c1, c2] = corners.map(|v| coords[v]);
    let on_segment = |p: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
        let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
        cross.abs() < 1e-9 && dot >= -1e-9 && dot <= len2 + 1e-9
    };
    let v1 = corners[1];
    let pick = |a: [f64; 2], b: [f64; 2]| -> Vec<VertexId> {
        (0..coords.len())
            .filter(|&v| v != v1 && on_segment(coords[v], a, b))
            .collect()
    };
    TerminalSpec::new(pick(c0, c1), pick(c1, c2))
}

/// The unit equilateral triangle `T_0`.
fn base_triangle() -> Result<Triangulation> {
    let mut g = Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])?;
    for (v, tag) in ["v0", "v1", "v2"].into_iter().enumerate() {
        g.set_label(v, tag);
    }
    let h = 3f64.sqrt() / 2.0;
    Triangulation::new(
        g,
        vec![[0, 1, 2]],
        Some(vec![[0.0, 0.0], [1.0, 0.0], [0.5, h]]),
        [0, 1, 2],
        0,
    )
}

/// One barycentric subdivision step.
///
/// Faces are visited in order; for each face `(a, b, c)` the midpoints of
/// `ab`, `bc`, `ca` are created (once per parent edge) and then the
/// barycenter `g`. Each parent edge `(x, y)` becomes `(x, m), (m, y)` when its
/// midpoint is created, followed by the six spokes of `g`. Children of face
/// `f` are faces `6f..6f+6`:
/// `0 = (a, m_ab, g)`, `1 = (m_ab, b, g)`, `2 = (b, m_bc, g)`,
/// `3 = (m_bc, c, g)`, `4 = (c, m_ca, g)`, `5 = (m_ca, a, g)`.
pub fn subdivide(t: &Triangulation) -> Result<Triangulation> {
    let parent = &t.graph;
    let mut g = Multigraph::new(parent.vertex_count());
    for (&v, tag) in parent.labels() {
        g.set_label(v, tag.clone());
    }
    let mut coords = t.coords.clone();
    let mut midpoint: Vec<Option<VertexId>> = vec![None; parent.edge_count()];
    let mut faces = Vec::with_capacity(6 * t.faces.len());
    let average = |coords: &Option<Vec<[f64; 2]>>, vs: &[VertexId]| {
        coords.as_ref().map(|c| {
            let k = vs.len() as f64;
            let x = vs.iter().map(|&v| c[v][0]).sum::<f64>() / k;
            let y = vs.iter().map(|&v| c[v][1]).sum::<f64>() / k;
            [x, y]
        })
    };

    for (f, &[a, b, c]) in t.faces.iter().enumerate() {
        let mut mids = [0; 3];
        for (i, &e) in t.face_edges[f].iter().enumerate() {
            mids[i] = match midpoint[e] {
                Some(m) => m,
                None => {
                    let (x, y) = parent.endpoints(e);
                    let m = g.add_vertex();
                    if let (Some(p), Some(cs)) = (average(&coords, &[x, y]), coords.as_mut()) {
                        cs.push(p);
                    }
                    g.add_edge(x, m)?;
                    g.add_edge(m, y)?;
                    midpoint[e] = Some(m);
                    m
                }
            };
        }
        let bc_vertex = g.add_vertex();
        if let (Some(p), Some(cs)) = (average(&coords, &[a, b, c]), coords.as_mut()) {
            cs.push(p);
        }
        let [m_ab, m_bc, m_ca] = mids;
        for v in [a, m_ab, b, m_bc, c, m_ca] {
            g.add_edge(bc_vertex, v)?;
        }
        faces.extend_from_slice(&[
            [a, m_ab, bc_vertex],
            [m_ab, b, bc_vertex],
            [b, m_bc, bc_vertex],
            [m_bc, c, bc_vertex],
            [c, m_ca, bc_vertex],
            [m_ca, a, bc_vertex],
        ]);
    }
    Triangulation::new(g, faces, coords, t.corners, t.level + 1)
}

/// Builds `T_level`, the `level`-fold barycentric subdivision of the unit
/// equilateral triangle with corners `v0 = (0,0)`, `v1 = (1,0)`,
/// `v2 = (1/2, sqrt(3)/2)`. Level-one vertices are labelled `b01`, `b12`,
/// `b20` and `b`.
pub fn gen_barycentric(level: u32) -> Result<Triangulation> {
    guard_power(6, level, "barycentric face count")?;
    let mut t = base_triangle()?;
    for step in 0..level {
        t = subdivide(&t)?;
        if step == 0 {
            for (v, tag) in [(3, "b01"), (4, "b12"), (5, "b20"), (6, "b")] {
                t.graph.set_label(v, tag);
            }
        }
    }
    Ok(t)
}
