//! Simplicity of the graph product: join recursion, hypothesis gates, and the
//! branch selection between the finite-dimensional and the unitary criteria.

use super::problem::Problem;
use super::verdict::{cite, Evidence, Verdict, VerdictResult};
use super::AnalysisOptions;
use crate::error::Result;
use crate::fock::{lambda_op, tail_profile};
use crate::growth::{classify, Region};
use crate::vertex::centered_unitary_search;
use serde_json::json;

pub const STATEMENT: &str = "simplicity of the graph product C*-algebra";

/// Runs the pipeline. Never concludes non-simplicity; failures of the
/// sufficient conditions are `HypothesesFail` or `Inconclusive`.
pub fn simplicity_report(p: &Problem, opts: &AnalysisOptions) -> Result<Verdict> {
    let factors = p.graph.join_decomposition();
    if factors.len() == 1 {
        return simplicity_factor(p, opts);
    }
    let mut v = Verdict::new(STATEMENT);
    v.citations.push(cite::JOIN_TENSOR.into());
    v.push(Evidence::fact("join_factors", factors.len()));
    let mut results = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let sub = p.induced(&f.embedding);
        let fv = simplicity_report(&sub, opts)?;
        let names: Vec<&str> = f.embedding.iter().map(|x| p.graph.label(*x)).collect();
        v.push(Evidence::new(
            format!("factor{i}.result"),
            json!({ "vertices": names, "result": fv.result }),
            None,
            fv.result == VerdictResult::Established,
        ));
        v.absorb(&format!("factor{i}"), &fv);
        results.push(fv.result);
    }
    v.notes.push("a minimal tensor product is simple iff both factors are simple".into());
    let out = if results.iter().all(|r| *r == VerdictResult::Established) {
        (VerdictResult::Established, "simple: every join factor is simple")
    } else if results.contains(&VerdictResult::HypothesesFail) {
        (VerdictResult::HypothesesFail, "a join factor fails the hypotheses of the criteria")
    } else {
        (VerdictResult::Inconclusive, "a join factor is not decided by the criteria")
    };
    Ok(v.finish(out.0, out.1))
}

fn simplicity_factor(p: &Problem, opts: &AnalysisOptions) -> Result<Verdict> {
    let g = &p.graph;
    let mut v = Verdict::new(STATEMENT);
    let n = g.len();
    v.push(Evidence::fact("vertices", n));
    if n == 1 {
        let blocks = p.vertices[0].algebra.blocks().to_vec();
        let simple = blocks.len() == 1;
        v.push(Evidence::new("single_vertex_blocks", json!(blocks), None, simple));
        v.notes.push("a single vertex gives the vertex algebra itself; a finite-dimensional algebra is simple iff it is one matrix block".into());
        return Ok(if simple {
            v.finish(VerdictResult::Established, "simple: a full matrix algebra")
        } else {
            v.finish(VerdictResult::HypothesesFail, "the vertex algebra has more than one block")
        });
    }
    let connected = g.complement().is_connected();
    v.push(Evidence::new("at_least_three_vertices", n >= 3, None, n >= 3));
    v.push(Evidence::new("complement_connected", connected, None, connected));
    if n < 3 || !connected {
        return Ok(v.finish(
            VerdictResult::Inconclusive,
            "the criteria need at least three vertices and a connected complement",
        ));
    }

    // (a_v, q_v) and the position of q relative to the region of convergence
    let mut qs = Vec::with_capacity(n);
    let mut elems = Vec::with_capacity(n);
    for (i, vd) in p.vertices.iter().enumerate() {
        let (a, q, src) = vd.element_and_q()?;
        v.push(Evidence::new(format!("q[{}]", g.labels()[i]), json!({ "value": q, "source": src }), None, q > 0.0));
        qs.push(q);
        elems.push(a);
    }
    let positive = qs.iter().all(|q| *q > 0.0);
    let cls = if positive { Some(classify(g, &qs, opts.classify_tol)?) } else { None };
    if let Some(c) = &cls {
        v.push(Evidence::new(
            "growth_classification",
            json!({
                "region": c.region,
                "critical_t": c.critical_t,
                "clique_polynomial": c.clique_polynomial,
                "method": "first positive zero of the clique polynomial along the ray t*q",
            }),
            Some(opts.classify_tol),
            c.region == Region::OutsideClosure,
        ));
    }
    let outside = cls.as_ref().is_some_and(|c| c.region == Region::OutsideClosure);
    let faithful = p.vertices.iter().all(|x| x.state.is_faithful());

    let supplied_unitaries = p.vertices.iter().all(|x| x.witness_is_central_unitary());
    let searched_unitaries = || {
        p.vertices
            .iter()
            .all(|x| centered_unitary_search(&x.algebra, &x.state).is_some_and(|u| u.central))
    };

    if supplied_unitaries {
        v.push(Evidence::fact("supplied_centralizing_unitaries", true));
        if outside && faithful {
            v.notes.push("the finite-dimensional criterion also applies".into());
        }
        v.citations.extend([cite::SIMPLICITY_UNITARY.into(), cite::C_STAR_IRREDUCIBLE.into()]);
        let mut v = strip_failed_optional(v);
        v.notes.push("branch: centralizing unitaries".into());
        return Ok(v.finish(VerdictResult::Established, "simple, and the inclusion into the quotient is C*-irreducible"));
    }
    if outside && faithful {
        v.push(Evidence::new("faithful_finite_dimensional", true, None, true));
        v.citations.extend([cite::SIMPLICITY_FINITE_DIM.into(), cite::C_STAR_IRREDUCIBLE.into()]);
        if p.vertices.iter().any(|x| x.witness.is_some()) {
            v.notes.push("supplied witnesses are not centralizing unitaries".into());
        }
        v.notes.push("branch: finite-dimensional faithful".into());
        return Ok(v.finish(VerdictResult::Established, "simple, and the inclusion into the quotient is C*-irreducible"));
    }
    if searched_unitaries() {
        v.push(Evidence::fact("searched_centralizing_unitaries", true));
        v.citations.extend([cite::SIMPLICITY_UNITARY.into(), cite::C_STAR_IRREDUCIBLE.into()]);
        let mut v = strip_failed_optional(v);
        v.notes.push("branch: centralizing unitaries".into());
        return Ok(v.finish(VerdictResult::Established, "simple, and the inclusion into the quotient is C*-irreducible"));
    }
    if outside {
        // evidence only: the condition concerns the untruncated algebra
        let f = p.fock(opts.depth, opts.fock_cap)?;
        let mut tails = Vec::new();
        for (i, a) in elems.iter().enumerate() {
            let x = lambda_op(&f, crate::graph::VertexId(i as u8), a)?;
            let prof = tail_profile(&x)?;
            let keep = (x.guard().max(0) as usize).min(prof.len());
            tails.push(prof[..keep].to_vec());
        }
        let nondecay = tails.iter().all(|t| t.last().is_some_and(|x| *x > 1e-8));
        v.push(Evidence::new(
            "tail_profile_finite_depth_evidence",
            json!(tails),
            Some(1e-8),
            nondecay,
        ));
        v.citations.push(cite::SIMPLICITY_IDEAL.into());
        v.notes.push(format!(
            "states are not all faithful; the equivalence with trivial intersection with the tail ideal is evidenced at depth {} only",
            opts.depth
        ));
        return Ok(v.finish(VerdictResult::Inconclusive, "simple iff the graph product meets the tail ideal trivially; finite-depth evidence only"));
    }
    Ok(v.finish(
        VerdictResult::HypothesesFail,
        "the parameters lie in the closure of the region of convergence and no centralizing unitaries were found; no claim about simplicity",
    ))
}

/// The unitary branch does not use the growth condition, so a failed
/// classification is kept as information rather than as a failed check.
fn strip_failed_optional(mut v: Verdict) -> Verdict {
    for e in &mut v.evidence {
        if e.name == "growth_classification" && !e.passed {
            e.name = "growth_classification_informational".into();
            e.passed = true;
        }
    }
    v
}
