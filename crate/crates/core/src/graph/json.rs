use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EdgeId, Multigraph, TerminalSpec, VertexId};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalsDocument {
    pub side_a: Vec<VertexId>,
    pub side_b: Vec<VertexId>,
}

/// On-disk graph exchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub family: String,
    pub level: u32,
    pub vertex_count: usize,
    pub labels: BTreeMap<VertexId, String>,
    pub edges: Vec<[usize; 3]>,
    pub terminals: TerminalsDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<[VertexId; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_of: Option<String>,
}

impl GraphDocument {
    pub fn new(family: &str, level: u32, g: &Multigraph, t: &TerminalSpec) -> Self {
        Self::with_sides(family, level, g, t.side_a().to_vec(), t.side_b().to_vec())
    }

    pub fn with_sides(
        family: &str,
        level: u32,
        g: &Multigraph,
        side_a: Vec<VertexId>,
        side_b: Vec<VertexId>,
    ) -> Self {
        Self {
            family: family.to_owned(),
            level,
            vertex_count: g.vertex_count(),
            labels: g.labels().clone(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| [e, u, v])
                .collect(),
            terminals: TerminalsDocument { side_a, side_b },
            coords: None,
            faces: None,
            dual_of: None,
        }
    }

    /// Rebuilds the graph and terminals, checking that edge ids are dense.
    /// Terminals are `None` when a side is empty (e.g. the one-vertex `H_0`).
    pub fn to_graph(&self) -> Result<(Multigraph, Option<TerminalSpec>)> {
        let mut g = Multigraph::new(self.vertex_count);
        for (i, &[e, u, v]) in self.edges.iter().enumerate() {
            if e != i as EdgeId {
                return invalid(format!("edge id {e} at position {i}; ids must be dense"));
            }
            g.add_edge(u, v)?;
        }
        for (&v, tag) in &self.labels {
            g.check_vertex(v)?;
            g.set_label(v, tag.clone());
        }
        if self.terminals.side_a.is_empty() || self.terminals.side_b.is_empty() {
            return Ok((g, None));
        }
        let t = TerminalSpec::new(self.terminals.side_a.clone(), self.terminals.side_b.clone())?;
        t.validate(&g)?;
        Ok((g, Some(t)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("graph document serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::InvalidInput(e.to_string()))
    }
}
