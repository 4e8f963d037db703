use crate::error::{invalid, Result};
use crate::graph::{Multigraph, TerminalSpec};

use super::guard_power;

/// Branch count `m`, path length `n` and recursion depth of a diamond graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiamondParams {
    pub m: u32,
    pub n: u32,
    pub level: u32,
}

impl DiamondParams {
    pub fn new(m: u32, n: u32, level: u32) -> Result<Self> {
        if m < 2 || n < 2 {
            return invalid(format!("diamond needs m, n >= 2 (got m={m}, n={n})"));
        }
        Ok(Self { m, n, level })
    }
}

/// Builds `D_level(m, n)`. Vertex 0 is `A`, vertex 1 is `B`.
///
/// Each level-`(l-1)` edge `e = (x, y)` is replaced, in edge order, by `m`
/// parallel paths `x - w_1 - ... - w_{n-1} - y`. The new edges of `e` get ids
/// `e*m*n + branch*n + step`; interior vertices are appended in the same order.
pub fn gen_diamond(p: DiamondParams) -> Result<(Multigraph, TerminalSpec)> {
    let p = DiamondParams::new(p.m, p.n, p.level)?;
    guard_power(
        u64::from(p.m) * u64::from(p.n),
        p.level,
        "diamond edge count",
    )?;
    let (m, n) = (p.m as usize, p.n as usize);
    let mut g = Multigraph::from_edges(2, &[(0, 1)])?;
    g.set_label(0, "A");
    g.set_label(1, "B");
    for _ in 0..p.level {
        let mut next = Multigraph::new(g.vertex_count());
        for &(x, y) in g.edges() {
            for _ in 0..m {
                let mut prev = x;
                for _ in 1..n {
                    let w = next.add_vertex();
                    next.add_edge(prev, w)?;
                    prev = w;
                }
                next.add_edge(prev, y)?;
            }
        }
        next.set_label(0, "A");
        next.set_label(1, "B");
        g = next;
    }
    Ok((g, TerminalSpec::pair(0, 1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{are_isomorphic, connected};

    fn diamond(m: u32, n: u32, level: u32) -> Multigraph {
        gen_diamond(DiamondParams::new(m, n, level).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn small_counts() {
        let d0 = diamond(3, 4, 0);
        assert_eq!((d0.vertex_count(), d0.edge_count()), (2, 1));
        let d1 = diamond(2, 2, 1);
        assert_eq!((d1.vertex_count(), d1.edge_count()), (4, 4));
        let d2 = diamond(2, 2, 2);
        assert_eq!((d2.vertex_count(), d2.edge_count()), (12, 16));
    }

    #[test]
    fn count_recurrences() {
        for (m, n) in [(2u64, 2u64), (2, 3), (3, 2), (4, 4)] {
            let mut v = 2u64;
            for level in 0..=4u32 {
                if level > 0 {
                    v += m * (n - 1) * (m * n).pow(level - 1);
                }
                let g = diamond(m as u32, n as u32, level);
                assert_eq!(g.edge_count() as u64, (m * n).pow(level));
                assert_eq!(g.vertex_count() as u64, v);
            }
        }
    }

    #[test]
    fn d1_is_four_cycle_not_path() {
        let d1 = diamond(2, 2, 1);
        let c4 = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p4 = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(are_isomorphic(&d1, &c4).unwrap());
        assert!(!are_isomorphic(&d1, &p4).unwrap());
    }

    #[test]
    fn d1_crossings() {
        let (g, t) = gen_diamond(DiamondParams::new(2, 2, 1).unwrap()).unwrap();
        assert!(connected(&g, 0..4, &t).unwrap());
        assert!(!connected(&g, [], &t).unwrap());
        // Branch 0 is edges 0 and 1.
        assert!(connected(&g, [0, 1], &t).unwrap());
        assert!(!connected(&g, [0, 3], &t).unwrap());
    }

    #[test]
    fn guards() {
        assert!(DiamondParams::new(1, 2, 1).is_err());
        let p = DiamondParams::new(2, 2, 12).unwrap();
        assert!(matches!(gen_diamond(p), Err(crate::Error::Capability(_))));
    }
}
