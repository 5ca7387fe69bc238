//! Hypothesis checks and verdicts for simplicity, traces and nuclearity, and
//! the identity suite.

pub mod identities;
pub mod nuclearity;
pub mod problem;
pub mod simplicity;
pub mod trace;
pub mod verdict;

pub use identities::{identity_suite, CheckRecord, SuiteOptions, SuiteReport};
pub use nuclearity::nuclearity_exactness_report;
pub use problem::{Problem, VertexData};
pub use simplicity::simplicity_report;
pub use trace::{trace_report, traciality_probe, ProbeReport};
pub use verdict::{Evidence, Verdict, VerdictResult};

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisOptions {
    /// Truncation used for finite-depth evidence and the traciality probe.
    pub depth: usize,
    pub seed: u64,
    pub classify_tol: f64,
    pub fock_cap: usize,
    pub probe_pairs: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            depth: 4,
            seed: 0,
            classify_tol: crate::growth::DEFAULT_CLASSIFY_TOL,
            fock_cap: crate::fock::space::DEFAULT_DIM_CAP,
            probe_pairs: 100,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimplicialGraph;
    use crate::linalg::{DenseMatrix, C64};
    use crate::vertex::{AlgebraElement, FiniteDimAlgebra, StateSpec};

    fn diag_pm() -> AlgebraElement {
        let mut m = DenseMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        m[(1, 1)] = C64::new(-1.0, 0.0);
        AlgebraElement { blocks: vec![m] }
    }

    fn m2_trace_edgeless3() -> Problem {
        let vs = (0..3).map(|_| VertexData::matrix_trace(2).unwrap().with_witness(diag_pm()).unwrap()).collect();
        Problem::new(SimplicialGraph::edgeless(3), vs).unwrap()
    }

    fn hecke_edgeless3(q: f64) -> Problem {
        let vs = (0..3).map(|_| VertexData::hecke(q).unwrap()).collect();
        Problem::new(SimplicialGraph::edgeless(3), vs).unwrap()
    }

    #[test]
    fn simplicity_branches() {
        let o = AnalysisOptions::default();
        let v = simplicity_report(&m2_trace_edgeless3(), &o).unwrap();
        assert_eq!(v.result, VerdictResult::Established);
        assert!(v.citations.iter().any(|c| c == verdict::cite::SIMPLICITY_UNITARY));
        let v = simplicity_report(&hecke_edgeless3(1.0), &o).unwrap();
        assert_eq!(v.result, VerdictResult::Established);
        assert!(v.citations.iter().any(|c| c == verdict::cite::SIMPLICITY_FINITE_DIM));
        let v = simplicity_report(&hecke_edgeless3(0.1), &o).unwrap();
        assert_eq!(v.result, VerdictResult::HypothesesFail, "{v:#?}");
    }

    #[test]
    fn join_recursion() {
        // K1 + edgeless-3: the isolated factor is M_2, the other is simple
        let g = SimplicialGraph::from_names(&["a", "b", "c", "d"], &[("a", "d"), ("b", "d"), ("c", "d")]).unwrap();
        let mut vs: Vec<VertexData> =
            (0..3).map(|_| VertexData::matrix_trace(2).unwrap().with_witness(diag_pm()).unwrap()).collect();
        vs.push(VertexData::matrix_trace(2).unwrap());
        let p = Problem::new(g, vs).unwrap();
        let v = simplicity_report(&p, &AnalysisOptions::default()).unwrap();
        assert_eq!(v.result, VerdictResult::Established, "{v:#?}");
        let t = trace_report(&p, &AnalysisOptions::default()).unwrap();
        assert_eq!(t.result, VerdictResult::Established, "{t:#?}");
    }

    #[test]
    fn trace_branches() {
        let o = AnalysisOptions { depth: 3, ..Default::default() };
        let t = trace_report(&m2_trace_edgeless3(), &o).unwrap();
        assert_eq!(t.result, VerdictResult::Established);
        assert!(t.conclusion.contains("unique"));
        let alg = FiniteDimAlgebra::new(vec![2]).unwrap();
        let mut rho = DenseMatrix::zeros(2, 2);
        rho[(0, 0)] = C64::new(0.7, 0.0);
        rho[(1, 1)] = C64::new(0.3, 0.0);
        let st = StateSpec::new(&alg, vec![rho]).unwrap();
        let mut vs: Vec<VertexData> = (0..2).map(|_| VertexData::matrix_trace(2).unwrap()).collect();
        vs.push(VertexData::new(alg, st, None).unwrap());
        let p = Problem::new(SimplicialGraph::edgeless(3), vs).unwrap();
        let t = trace_report(&p, &o).unwrap();
        assert_eq!(t.result, VerdictResult::Established, "{t:#?}");
        assert!(t.conclusion.contains("no tracial state"));
        // no centered unitary in ℂ² with unequal weights
        let vs = (0..3).map(|_| VertexData::commutative(&[0.3, 0.7]).unwrap()).collect();
        let p = Problem::new(SimplicialGraph::edgeless(3), vs).unwrap();
        assert_eq!(trace_report(&p, &o).unwrap().result, VerdictResult::Inconclusive);
    }

    #[test]
    fn nuclearity_examples() {
        let v = nuclearity_exactness_report(&hecke_edgeless3(2.0)).unwrap();
        assert_eq!(v.result, VerdictResult::Established);
        let single = Problem::new(SimplicialGraph::edgeless(1), vec![VertexData::matrix_trace(2).unwrap()]).unwrap();
        let v = nuclearity_exactness_report(&single).unwrap();
        assert_eq!(v.result, VerdictResult::Established);
        // the trace on M_2 has a GNS space of dimension 4, with commutant M_2
        assert!(!v.conclusion.contains("graph product is nuclear"));
    }

    #[test]
    fn default_suite_passes_and_fault_is_caught() {
        let p = hecke_edgeless3(2.0);
        let opts = SuiteOptions { draws: 10, expressions: 30, term_samples: 20, ..Default::default() };
        let r = identity_suite(&p, &opts).unwrap();
        assert!(r.passed, "{:#?}", r.failures());
        let r = identity_suite(&p, &SuiteOptions { fault: true, ..opts }).unwrap();
        assert!(!r.passed);
        assert!(!r.get("rewrite_matches_matrix").unwrap().passed);
    }
}
