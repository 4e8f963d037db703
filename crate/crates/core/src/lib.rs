//! Bond percolation on fractal graph families.
//!
//! The crate builds finite approximations of four hierarchical graphs (the
//! diamond fractal `D(m,n)`, iterated barycentric subdivisions `T_n` of a
//! triangle, the non-p.c.f. Sierpinski gasket `S_n` and the hexacarpet `H_n`),
//! runs uniform-label bond percolation on them, and checks the structural
//! relations between them at finite level:
//!
//! - [`graph`]: multigraph storage, union-find connectivity, quotients and
//!   isomorphism testing.
//! - [`generators`]: deterministic constructions of every family, the gasket
//!   collapse map and the diamond embedding into `T_k`.
//! - [`duality`]: planar pre-duals and exact crossing complementarity.
//! - [`percolation`]: environments, bottleneck thresholds, crossing curves and
//!   coupling experiments.
//! - [`analytic`]: the diamond crossing recursion and its critical point.
//! - [`geometry`]: areas, perimeters and the hexacarpet isoperimetric check.

pub mod analytic;
pub mod duality;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod percolation;

pub use error::{Error, Result};
pub use graph::{Multigraph, TerminalSpec};
