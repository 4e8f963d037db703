//! Deterministic constructions of the fractal graph families.
//!
//! Vertex and edge identifiers are assigned in creation order, so two runs
//! with the same parameters produce identical graphs.

mod barycentric;
mod diamond;
mod embedding;
mod gasket;

pub use barycentric::{gen_barycentric, side_terminals, subdivide, Triangulation};
pub use diamond::{gen_diamond, DiamondParams};
pub use embedding::{embed_diamond_in_t, embed_diamond_in_t_at, DiamondEmbedding};
pub use gasket::{collapse_pi, gen_gasket, CollapseMap, GasketComplex, VertexOrigin};

use crate::error::{capability, Result};

/// Upper bound on the number of edges or faces any generator will build.
pub const MAX_ELEMENTS: u64 = 10_000_000;

/// Checks `base^level <= MAX_ELEMENTS` without overflow.
pub(crate) fn guard_power(base: u64, level: u32, what: &str) -> Result<u64> {
    match base.checked_pow(level) {
        Some(x) if x <= MAX_ELEMENTS => Ok(x),
        _ => capability(format!(
            "{what}: {base}^{level} exceeds the {MAX_ELEMENTS} element guard"
        )),
    }
}
