//! Embedding of the diamond `D_{k-1}(2,2)` into `T_k`.
//!
//! Start from the edge `{v_i, b}` of `T_1`. Going from `T_j` to `T_{j+1}`,
//! every embedded edge `{x, y}` borders two faces `t < t'` of `T_j`; it is
//! replaced by the paths `x - t(b) - y` and `x - t'(b) - y` through the
//! barycenters those faces receive in `T_{j+1}`. This is exactly one step of
//! the `D(2,2)` recursion, so the embedded vertices and edges are produced in
//! the same order as [`gen_diamond`](super::gen_diamond) produces them.

use crate::error::{invalid, Result};
use crate::graph::{are_isomorphic, EdgeId, Multigraph, VertexId};

use super::{gen_barycentric, gen_diamond, subdivide, DiamondParams, Triangulation};

/// A subgraph certificate: `vertex_map[d]` is the image of diamond vertex `d`
/// and `edge_map[e]` the image of diamond edge `e`.
#[derive(Debug, Clone)]
pub struct DiamondEmbedding {
    pub k: u32,
    pub tri: Triangulation,
    pub diamond: Multigraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

impl DiamondEmbedding {
    /// Checks injectivity and that every diamond edge lands on a `T_k` edge
    /// with matching endpoints.
    pub fn verify(&self) -> Result<()> {
        let g = self.tri.graph();
        if self.vertex_map.len() != self.diamond.vertex_count()
            || self.edge_map.len() != self.diamond.edge_count()
        {
            return invalid("certificate size mismatch");
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &self.vertex_map {
            g.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return invalid(format!("vertex {v} hit twice"));
            }
        }
        let mut used = vec![false; g.edge_count()];
        for (d, &e) in self.edge_map.iter().enumerate() {
            g.check_edge(e)?;
            if std::mem::replace(&mut used[e], true) {
                return invalid(format!("edge {e} hit twice"));
            }
            let (a, b) = self.diamond.endpoints(d);
            let (x, y) = (self.vertex_map[a], self.vertex_map[b]);
            let (u, v) = g.endpoints(e);
            if (x, y) != (u, v) && (x, y) != (v, u) {
                return invalid(format!("diamond edge {d} does not map onto edge {e}"));
            }
        }
        Ok(())
    }

    /// The image as a graph on `0..vertex_map.len()`, read back from `T_k`.
    pub fn image(&self) -> Result<Multigraph> {
        let g = self.tri.graph();
        let mut inverse = vec![usize::MAX; g.vertex_count()];
        for (d, &v) in self.vertex_map.iter().enumerate() {
            inverse[v] = d;
        }
        let mut img = Multigraph::new(self.vertex_map.len());
        for &e in &self.edge_map {
            let (u, v) = g.endpoints(e);
            if inverse[u] == usize::MAX || inverse[v] == usize::MAX {
                return invalid(format!("edge {e} leaves the embedded vertex set"));
            }
            img.add_edge(inverse[u], inverse[v])?;
        }
        Ok(img)
    }

    /// Full check: valid certificate and image isomorphic to a freshly
    /// generated `D_{k-1}(2,2)`.
    pub fn check(&self) -> Result<bool> {
        self.verify()?;
        let (reference, _) = gen_diamond(DiamondParams::new(2, 2, self.k - 1)?)?;
        are_isomorphic(&self.image()?, &reference)
    }
}

/// Embeds `D_{k-1}(2,2)` into `T_k` rooted at corner `v0`.
pub fn embed_diamond_in_t(k: u32) -> Result<DiamondEmbedding> {
    embed_diamond_in_t_at(k, 0)
}

/// Embeds `D_{k-1}(2,2)` into `T_k` with terminals `v_corner` and `b`. The
/// three corners give the three copies around the central barycenter.
pub fn embed_diamond_in_t_at(k: u32, corner: usize) -> Result<DiamondEmbedding> {
    if !(2..=7).contains(&k) {
        return invalid(format!("embedding level k must be in 2..=7 (got {k})"));
    }
    if corner > 2 {
        return invalid(format!("corner index {corner} out of range"));
    }
    let mut tri = gen_barycentric(1)?;
    let centre = tri.graph().vertex_by_label("b").expect("T_1 labels b");
    let mut vertex_map = vec![tri.corners()[corner], centre];
    let mut edges: Vec<(VertexId, VertexId)> = vec![(vertex_map[0], centre)];
    for _ in 1..k {
        let edge_faces = tri.edge_faces();
        let lookup = edge_lookup(tri.graph());
        let next = subdivide(&tri)?;
        let mut next_edges = Vec::with_capacity(4 * edges.len());
        for &(x, y) in &edges {
            let e = *lookup
                .get(&(x.min(y), x.max(y)))
                .ok_or_else(|| crate::Error::InvalidInput(format!("({x}, {y}) not an edge")))?;
            let faces = &edge_faces[e];
            if faces.len() != 2 {
                return invalid(format!("embedded edge ({x}, {y}) lies on the boundary"));
            }
            for &f in faces {
                // Child 0 of face f is (a, m_ab, g).
                let centre = next.faces()[6 * f][2];
                vertex_map.push(centre);
                next_edges.push((x, centre));
                next_edges.push((centre, y));
            }
        }
        edges = next_edges;
        tri = next;
    }
    let lookup = edge_lookup(tri.graph());
    let edge_map = edges
        .iter()
        .map(|&(x, y)| lookup[&(x.min(y), x.max(y))])
        .collect();
    let (diamond, _) = gen_diamond(DiamondParams::new(2, 2, k - 1)?)?;
    Ok(DiamondEmbedding {
        k,
        tri,
        diamond,
        vertex_map,
        edge_map,
    })
}

fn edge_lookup(g: &Multigraph) -> std::collections::HashMap<(VertexId, VertexId), EdgeId> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| ((u.min(v), u.max(v)), e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_copies_match_named_vertices() {
        // Copy rooted at v0 is {v0, centre of child 0, b, centre of child 5}.
        let t1 = gen_barycentric(1).unwrap();
        let t2 = subdivide(&t1).unwrap();
        let emb = embed_diamond_in_t(2).unwrap();
        let child_centre = |c: usize| t2.faces()[6 * c][2];
        let mut got = emb.vertex_map.clone();
        got.sort_unstable();
        let mut want = vec![0, child_centre(0), 6, child_centre(5)];
        want.sort_unstable();
        assert_eq!(got, want);

        let emb1 = embed_diamond_in_t_at(2, 1).unwrap();
        let mut got = emb1.vertex_map.clone();
        got.sort_unstable();
        let mut want = vec![1, child_centre(1), 6, child_centre(2)];
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn small_certificates() {
        let e2 = embed_diamond_in_t(2).unwrap();
        assert_eq!(e2.vertex_map.len(), 4);
        assert_eq!(e2.edge_map.len(), 4);
        assert!(e2.check().unwrap());
        let e3 = embed_diamond_in_t(3).unwrap();
        assert_eq!(e3.edge_map.len(), 16);
        assert!(e3.check().unwrap());
        for corner in 0..3 {
            assert!(embed_diamond_in_t_at(3, corner).unwrap().check().unwrap());
        }
    }

    #[test]
    fn range_guard() {
        assert!(embed_diamond_in_t(1).is_err());
        assert!(embed_diamond_in_t(8).is_err());
        assert!(embed_diamond_in_t_at(2, 3).is_err());
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut e = embed_diamond_in_t(2).unwrap();
        e.vertex_map.swap(0, 2);
        assert!(e.verify().is_err());
    }
}
