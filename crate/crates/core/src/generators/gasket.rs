//! Non-p.c.f. Sierpinski gasket approximations and the collapse map onto the
//! barycentric subdivision.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::graph::{quotient_by_map, EdgeId, GraphDocument, Multigraph, TerminalSpec, VertexId};

use super::{guard_power, Triangulation};

/// How a gasket vertex came into being.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    /// One of the three corners of `S_0`.
    Corner(usize),
    /// Midpoint of the private edge `(a, b)` of a cell, created at `generation`.
    Midpoint {
        a: VertexId,
        b: VertexId,
        generation: u32,
    },
    /// Barycenter of the cell with the given corners.
    Barycenter {
        corners: [VertexId; 3],
        generation: u32,
    },
}

/// `S_level` as a set of triangle cells, each owning its three edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GasketComplex {
    graph: Multigraph,
    triangles: Vec<[EdgeId; 3]>,
    corners: Vec<[VertexId; 3]>,
    origins: Vec<VertexOrigin>,
    level: u32,
}

impl GasketComplex {
    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    /// Edge ids of each cell, ordered `(c0,c1), (c1,c2), (c2,c0)`.
    pub fn triangles(&self) -> &[[EdgeId; 3]] {
        &self.triangles
    }

    pub fn triangle_corners(&self) -> &[[VertexId; 3]] {
        &self.corners
    }

    pub fn origins(&self) -> &[VertexOrigin] {
        &self.origins
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Planar position of every vertex, derived from its origin on the unit
    /// equilateral triangle.
    pub fn coords(&self) -> Vec<[f64; 2]> {
        let h = 3f64.sqrt() / 2.0;
        let base = [[0.0, 0.0], [1.0, 0.0], [0.5, h]];
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(self.origins.len());
        for origin in &self.origins {
            let p = match *origin {
                VertexOrigin::Corner(i) => base[i],
                VertexOrigin::Midpoint { a, b, .. } => {
                    [(out[a][0] + out[b][0]) / 2.0, (out[a][1] + out[b][1]) / 2.0]
                }
                VertexOrigin::Barycenter {
                    corners: [a, b, c], ..
                } => [
                    (out[a][0] + out[b][0] + out[c][0]) / 3.0,
                    (out[a][1] + out[b][1] + out[c][1]) / 3.0,
                ],
            };
            out.push(p);
        }
        out
    }

    pub fn corner_terminals(&self) -> TerminalSpec {
        TerminalSpec::pair(0, 1).expect("corners differ")
    }

    pub fn to_document(&self) -> GraphDocument {
        let mut doc =
            GraphDocument::new("gasket", self.level, &self.graph, &self.corner_terminals());
        doc.coords = Some(self.coords());
        doc
    }
}

fn base_gasket() -> Result<GasketComplex> {
    let mut g = Multigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])?;
    for (v, tag) in ["v0", "v1", "v2"].into_iter().enumerate() {
        g.set_label(v, tag);
    }
    Ok(GasketComplex {
        graph: g,
        triangles: vec![[0, 1, 2]],
        corners: vec![[0, 1, 2]],
        origins: (0..3).map(VertexOrigin::Corner).collect(),
        level: 0,
    })
}

/// Replaces every cell by a copy of `S_1`. For a cell `(a, b, c)` the
/// midpoints of its three private edges and then its barycenter `g` are
/// created; the six children `(a,m_ab,g), (m_ab,b,g), (b,m_bc,g),
/// (m_bc,c,g), (c,m_ca,g), (m_ca,a,g)` each receive three fresh edges.
fn refine(s: &GasketComplex) -> Result<GasketComplex> {
    let generation = s.level + 1;
    let mut g = Multigraph::new(s.graph.vertex_count());
    for (&v, tag) in s.graph.labels() {
        g.set_label(v, tag.clone());
    }
    let mut origins = s.origins.clone();
    let mut triangles = Vec::with_capacity(6 * s.triangles.len());
    let mut corners = Vec::with_capacity(6 * s.triangles.len());
    for (cell, &[a, b, c]) in s.corners.iter().enumerate() {
        let mut mids = [0; 3];
        for (i, &e) in s.triangles[cell].iter().enumerate() {
            let (x, y) = s.graph.endpoints(e);
            mids[i] = g.add_vertex();
            origins.push(VertexOrigin::Midpoint {
                a: x,
                b: y,
                generation,
            });
        }
        let centre = g.add_vertex();
        origins.push(VertexOrigin::Barycenter {
            corners: [a, b, c],
            generation,
        });
        let [m_ab, m_bc, m_ca] = mids;
        for tri in [
            [a, m_ab, centre],
            [m_ab, b, centre],
            [b, m_bc, centre],
            [m_bc, c, centre],
            [c, m_ca, centre],
            [m_ca, a, centre],
        ] {
            let e0 = g.add_edge(tri[0], tri[1])?;
            let e1 = g.add_edge(tri[1], tri[2])?;
            let e2 = g.add_edge(tri[2], tri[0])?;
            triangles.push([e0, e1, e2]);
            corners.push(tri);
        }
    }
    Ok(GasketComplex {
        graph: g,
        triangles,
        corners,
        origins,
        level: generation,
    })
}

/// Builds `S_level`. Level-one vertices are labelled `b01`, `b12`, `b20`, `b`.
pub fn gen_gasket(level: u32) -> Result<GasketComplex> {
    guard_power(6, level, "gasket triangle count")?;
    let mut s = base_gasket()?;
    for step in 0..level {
        s = refine(&s)?;
        if step == 0 {
            for (v, tag) in [(3, "b01"), (4, "b12"), (5, "b20"), (6, "b")] {
                s.graph.set_label(v, tag);
            }
        }
    }
    Ok(s)
}

/// Output of [`collapse_pi`].
#[derive(Debug, Clone)]
pub struct CollapseMap {
    /// Gasket vertex → quotient vertex.
    pub class_of: Vec<VertexId>,
    /// Quotient of the gasket; same edge ids as the gasket.
    pub s_tilde: Multigraph,
    /// Simple graph obtained by merging each parallel pair of `s_tilde`.
    pub t: Triangulation,
    /// For each edge of `t`, the one or two gasket edges it replaces.
    pub edge_pairs: Vec<Vec<EdgeId>>,
}

impl CollapseMap {
    /// Pushes a gasket labelling onto `t`: each `t` edge takes the minimum
    /// label of the gasket edges it replaces.
    pub fn push_labels(&self, labels: &[f64]) -> Vec<f64> {
        self.edge_pairs
            .iter()
            .map(|pair| {
                pair.iter()
                    .map(|&e| labels[e])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Export of the quotient `S̃` with the gasket's corner terminals and
    /// the coordinates of each class.
    pub fn quotient_document(&self, s: &GasketComplex) -> Result<GraphDocument> {
        let terminals = s.corner_terminals().map(|v| self.class_of[v])?;
        let mut doc = GraphDocument::new("gasket-quotient", s.level, &self.s_tilde, &terminals);
        let mut coords = vec![[0.0; 2]; self.s_tilde.vertex_count()];
        for (v, &p) in s.coords().iter().enumerate() {
            coords[self.class_of[v]] = p;
        }
        doc.coords = Some(coords);
        Ok(doc)
    }

    /// The gasket edge ids map onto `t` edges via this table.
    pub fn t_edge_of(&self) -> Vec<EdgeId> {
        let mut out = vec![0; self.s_tilde.edge_count()];
        for (te, pair) in self.edge_pairs.iter().enumerate() {
            for &e in pair {
                out[e] = te;
            }
        }
        out
    }
}

/// The collapse map from `S_level` onto `T_level`.
///
/// Vertices are visited in creation order. A midpoint created at generation
/// `g >= 2` is identified with any earlier midpoint of the same generation
/// whose parent edge joins the same two quotient classes, i.e. the two
/// midpoints of a parallel pair. Everything else gets a fresh class.
pub fn collapse_pi(s: &GasketComplex) -> Result<CollapseMap> {
    if s.level == 0 {
        return invalid("collapse map needs level >= 1");
    }
    let n = s.graph.vertex_count();
    let mut class_of = Vec::with_capacity(n);
    let mut class_size: Vec<usize> = Vec::new();
    let mut by_parent: HashMap<(u32, usize, usize), usize> = HashMap::new();
    for origin in &s.origins {
        let class = match *origin {
            VertexOrigin::Midpoint { a, b, generation } if generation >= 2 => {
                let (ca, cb): (usize, usize) = (class_of[a], class_of[b]);
                let k = (generation, ca.min(cb), ca.max(cb));
                *by_parent.entry(k).or_insert_with(|| {
                    class_size.push(0);
                    class_size.len() - 1
                })
            }
            _ => {
                class_size.push(0);
                class_size.len() - 1
            }
        };
        class_size[class] += 1;
        if class_size[class] > 2 {
            return invalid("more than two midpoints share one quotient edge");
        }
        class_of.push(class);
    }
    let class_count = class_size.len();
    let s_tilde = quotient_by_map(&s.graph, &class_of, class_count)?;

    let mut t_graph = Multigraph::new(class_count);
    for (&v, tag) in s_tilde.labels() {
        t_graph.set_label(v, tag.clone());
    }
    let mut t_edge: HashMap<(usize, usize), EdgeId> = HashMap::new();
    let mut edge_pairs: Vec<Vec<EdgeId>> = Vec::new();
    for (e, &(u, v)) in s_tilde.edges().iter().enumerate() {
        let k = (u.min(v), u.max(v));
        match t_edge.get(&k) {
            Some(&te) => {
                edge_pairs[te].push(e);
                if edge_pairs[te].len() > 2 {
                    return invalid(format!("quotient joins ({u}, {v}) by more than two edges"));
                }
            }
            None => {
                let te = t_graph.add_edge(u, v)?;
                t_edge.insert(k, te);
                edge_pairs.push(vec![e]);
            }
        }
    }

    let s_coords = s.coords();
    let mut coords = vec![[f64::NAN; 2]; class_count];
    for (v, &c) in class_of.iter().enumerate() {
        if coords[c][0].is_nan() {
            coords[c] = s_coords[v];
        } else {
            let d = (coords[c][0] - s_coords[v][0]).hypot(coords[c][1] - s_coords[v][1]);
            if d > 1e-9 {
                return invalid("identified vertices are not co-located");
            }
        }
    }
    let faces = s
        .corners
        .iter()
        .map(|tri| tri.map(|v| class_of[v]))
        .collect();
    let corners = [class_of[0], class_of[1], class_of[2]];
    let t = Triangulation::new(t_graph, faces, Some(coords), corners, s.level)?;
    Ok(CollapseMap {
        class_of,
        s_tilde,
        t,
        edge_pairs,
    })
}
