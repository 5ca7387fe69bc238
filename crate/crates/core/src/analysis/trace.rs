//! Uniqueness and non-existence of tracial states, and the numerical
//! traciality probe of the vacuum state.

use super::problem::Problem;
use super::verdict::{cite, Evidence, Verdict, VerdictResult};
use super::AnalysisOptions;
use crate::error::Result;
use crate::fock::{lambda_op, OperatorMatrix, TruncatedFock};
use crate::graph::VertexId;
use crate::linalg::{ONE, ZERO};
use crate::vertex::centered_unitary_search;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::sync::Arc;

pub const STATEMENT: &str = "tracial states of the graph product C*-algebra";

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub pairs: usize,
    pub max_defect: f64,
    pub seed: u64,
}

/// `|ω(xy) − ω(yx)|` over random pairs of products of vertex elements whose
/// total length fits the truncation, so the vacuum values are exact.
pub fn traciality_probe(f: &Arc<TruncatedFock>, pairs: usize, seed: u64) -> Result<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.graph().len();
    let half = (f.depth() / 2).max(1);
    let mut omega = vec![ZERO; f.dim()];
    omega[0] = ONE;
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let x = random_word_product(f, n, half, &mut rng)?;
        let y = random_word_product(f, n, half, &mut rng)?;
        let xy = x.apply(&y.apply(&omega))[0];
        let yx = y.apply(&x.apply(&omega))[0];
        worst = worst.max((xy - yx).norm());
    }
    Ok(ProbeReport { pairs, max_defect: worst, seed })
}

fn random_word_product(f: &Arc<TruncatedFock>, n: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Result<OperatorMatrix> {
    let len = rng.random_range(1..=max_len);
    let mut acc = OperatorMatrix::identity(f.clone());
    for _ in 0..len {
        let v = VertexId(rng.random_range(0..n) as u8);
        let a = f.rep(v).algebra().random_element(rng);
        acc = acc.mul(&lambda_op(f, v, &a)?)?;
    }
    Ok(acc)
}

enum FactorOutcome {
    Unique,
    NoTrace,
    Undecided,
}

pub fn trace_report(p: &Problem, opts: &AnalysisOptions) -> Result<Verdict> {
    let mut v = Verdict::new(STATEMENT);
    let factors = p.graph.join_decomposition();
    v.push(Evidence::fact("join_factors", factors.len()));
    let mut outcomes = Vec::new();
    for (i, fct) in factors.iter().enumerate() {
        let sub = p.induced(&fct.embedding);
        let pre = if factors.len() == 1 { String::new() } else { format!("factor{i}.") };
        outcomes.push(trace_factor(&sub, &pre, &mut v));
    }

    let tracial = p.all_tracial();
    v.push(Evidence::fact("all_vertex_states_tracial", tracial));
    if let Ok(f) = p.fock(opts.depth, opts.fock_cap) {
        let pr = traciality_probe(&f, opts.probe_pairs, opts.seed)?;
        v.seeds.push(pr.seed);
        let ok = if tracial { pr.max_defect <= 1e-10 } else { true };
        v.push(Evidence::new(
            "traciality_probe",
            json!({ "pairs": pr.pairs, "max_defect": pr.max_defect, "depth": opts.depth }),
            Some(1e-10),
            ok,
        ));
    } else {
        v.notes.push("traciality probe skipped: Fock space over the dimension cap".into());
    }

    let result = if outcomes.iter().any(|o| matches!(o, FactorOutcome::NoTrace)) {
        v.citations.push(cite::TRACE_NONE.into());
        if factors.len() > 1 {
            v.notes.push("a trace on the tensor product would restrict to a trace on a factor".into());
            // other factors are not needed for this conclusion
            for e in v.evidence.iter_mut().filter(|e| !e.passed) {
                e.name.push_str(" (informational)");
                e.passed = true;
            }
        }
        (VerdictResult::Established, "admits no tracial state")
    } else if outcomes.iter().all(|o| matches!(o, FactorOutcome::Unique)) {
        if factors.len() == 1 || matrix_factors_but_one(p, &factors) {
            v.citations.push(cite::TRACE_UNIQUE.into());
            (VerdictResult::Established, "the vacuum state is the unique tracial state")
        } else {
            v.notes.push("uniqueness of the trace on a tensor product of several infinite-dimensional factors is not decided here".into());
            (VerdictResult::Inconclusive, "every join factor has a unique trace")
        }
    } else {
        (VerdictResult::Inconclusive, "the criteria do not apply to some join factor")
    };
    Ok(v.finish(result.0, result.1))
}

fn matrix_factors_but_one(p: &Problem, factors: &[crate::graph::Subgraph]) -> bool {
    let big = factors
        .iter()
        .filter(|f| !(f.embedding.len() == 1 && p.vertex(f.embedding[0]).algebra.blocks().len() == 1))
        .count();
    big <= 1
}

fn trace_factor(p: &Problem, pre: &str, v: &mut Verdict) -> FactorOutcome {
    let g = &p.graph;
    let n = g.len();
    if n == 1 {
        let vd = &p.vertices[0];
        let one_block = vd.algebra.blocks().len() == 1;
        v.push(Evidence::new(format!("{pre}single_full_matrix_algebra"), one_block, None, one_block));
        return if one_block { FactorOutcome::Unique } else { FactorOutcome::Undecided };
    }
    let connected = g.complement().is_connected();
    let hyp = n >= 3 && connected;
    v.push(Evidence::new(format!("{pre}at_least_three_vertices_connected_complement"), hyp, None, hyp));
    if !hyp {
        return FactorOutcome::Undecided;
    }
    let mut all_unitaries = true;
    for (i, vd) in p.vertices.iter().enumerate() {
        let found = if vd.witness.as_ref().is_some_and(|w| w.is_unitary(1e-10) && vd.state.eval(w).norm() <= 1e-10) {
            Some("supplied")
        } else if centered_unitary_search(&vd.algebra, &vd.state).is_some() {
            Some("searched")
        } else {
            None
        };
        v.push(Evidence::new(
            format!("{pre}unitary_in_kernel[{}]", g.labels()[i]),
            json!(found.unwrap_or("none")),
            None,
            found.is_some(),
        ));
        all_unitaries &= found.is_some();
    }
    if !all_unitaries {
        return FactorOutcome::Undecided;
    }
    if p.all_tracial() {
        FactorOutcome::Unique
    } else {
        let idx: Vec<&str> = p
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.state.is_tracial(1e-12))
            .map(|(i, _)| g.labels()[i].as_str())
            .collect();
        v.push(Evidence::fact(format!("{pre}non_tracial_vertices"), json!(idx)));
        FactorOutcome::NoTrace
    }
}
