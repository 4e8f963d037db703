use fractalperc::duality::hexacarpet;
use fractalperc::generators::{
    collapse_pi, gen_barycentric, gen_diamond, gen_gasket, side_terminals, DiamondParams,
};
use fractalperc::graph::GraphDocument;
use fractalperc::{Error, Multigraph, Result, TerminalSpec};

use crate::args::{Family, GraphArgs, Terminals};

pub fn document(g: &GraphArgs, dual_of: Option<&str>) -> Result<GraphDocument> {
    Ok(match g.family {
        Family::Diamond => {
            let (graph, t) = gen_diamond(DiamondParams::new(g.m, g.n, g.level)?)?;
            GraphDocument::new("diamond", g.level, &graph, &t)
        }
        Family::Tri => gen_barycentric(g.level)?.to_document("tri"),
        Family::Gasket => gen_gasket(g.level)?.to_document(),
        Family::GasketQuotient => {
            let s = gen_gasket(g.level)?;
            collapse_pi(&s)?.quotient_document(&s)?
        }
        Family::Hexacarpet => {
            let default = format!("tri-level-{}.json", g.level);
            hexacarpet(g.level)?.to_document(dual_of.unwrap_or(&default))
        }
    })
}

/// Graph and crossing terminals for a simulation.
pub fn graph_with_terminals(g: &GraphArgs, mode: Terminals) -> Result<(Multigraph, TerminalSpec)> {
    let side = mode == Terminals::Side;
    match g.family {
        Family::Tri if side => {
            let t = gen_barycentric(g.level)?;
            let spec = t.side_terminals()?;
            Ok((t.graph().clone(), spec))
        }
        Family::Gasket if side => {
            let s = gen_gasket(g.level)?;
            let spec = side_terminals(&s.coords(), [0, 1, 2])?;
            Ok((s.graph().clone(), spec))
        }
        Family::GasketQuotient if side => {
            let s = gen_gasket(g.level)?;
            let cm = collapse_pi(&s)?;
            let spec = side_terminals(&s.coords(), [0, 1, 2])?.map(|v| cm.class_of[v])?;
            Ok((cm.s_tilde, spec))
        }
        Family::Diamond | Family::Hexacarpet if side => Err(Error::InvalidInput(
            "side terminals are defined for tri, gasket and gasket-quotient only".into(),
        )),
        _ => {
            let (graph, t) = document(g, None)?.to_graph()?;
            let t = t.ok_or_else(|| Error::InvalidInput("this graph has no terminals".into()))?;
            Ok((graph, t))
        }
    }
}
