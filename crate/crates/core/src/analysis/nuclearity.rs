//! Nuclearity and exactness of the ambient algebra and of the graph product.

use super::problem::Problem;
use super::verdict::{cite, Evidence, Verdict, VerdictResult};
use crate::error::Result;
use crate::fock::q_projection;
use crate::graph::VertexId;
use crate::vertex::commutant_is_trivial;
use serde_json::json;

pub const STATEMENT: &str = "nuclearity and exactness";

/// Vertex algebras here are finite-dimensional, hence nuclear and exact.
pub fn nuclearity_exactness_report(p: &Problem) -> Result<Verdict> {
    let g = &p.graph;
    let mut v = Verdict::new(STATEMENT);
    let dims: Vec<usize> = p.vertices.iter().map(|x| x.algebra.dim()).collect();
    v.push(Evidence::new("vertex_algebras_finite_dimensional", json!(dims), None, true));
    v.citations.extend([cite::NUCLEAR_EXACT.into(), cite::GRAPH_PRODUCT_EXACT.into()]);

    let mut all_compacts = true;
    for (i, vd) in p.vertices.iter().enumerate() {
        let trivial = commutant_is_trivial(&vd.rep);
        all_compacts &= trivial;
        v.push(Evidence::fact(
            format!("gns_commutant_trivial[{}]", g.labels()[i]),
            json!({ "value": trivial, "gns_dim": vd.rep.dim() }),
        ));
    }
    let mut parts = vec!["the ambient algebra is nuclear and exact", "the graph product is exact"];
    if all_compacts {
        v.citations.push(cite::GRAPH_PRODUCT_NUCLEAR.into());
        parts.push("the graph product is nuclear");
    } else {
        v.notes.push(
            "some vertex algebra does not contain the compacts of its GNS space, so nuclearity of the graph product is not decided here"
                .into(),
        );
    }
    if g.len() == 1 {
        let f = p.fock(1, crate::fock::space::DEFAULT_DIM_CAP)?;
        let q = q_projection(&f, &f.group().generator(VertexId(0)))?;
        let rank_perp: f64 = (0..f.dim()).map(|i| 1.0 - q.matrix().get(i, i).re).sum();
        let ok = (rank_perp - 1.0).abs() < 1e-12;
        v.push(Evidence::new("vacuum_projection_rank", rank_perp, Some(1e-12), ok));
        v.notes.push("single vertex: the ambient algebra is the vertex algebra plus the compacts, generated by the rank-one vacuum projection".into());
    }
    Ok(v.finish(VerdictResult::Established, parts.join("; ")))
}
