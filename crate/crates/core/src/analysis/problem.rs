//! A graph together with its vertex algebras, states and optional witnesses.

use crate::error::{Error, Result};
use crate::fock::space::{build_fock_capped, TruncatedFock};
use crate::graph::{SimplicialGraph, VertexId};
use crate::vertex::{
    centered, centered_unitary_search, gns, hecke_vertex, is_central, optimal_q, AlgebraElement, FiniteDimAlgebra,
    GnsRep, StateSpec, CENTERED_TOL,
};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct VertexData {
    pub algebra: FiniteDimAlgebra,
    pub state: StateSpec,
    pub rep: GnsRep,
    /// Supplied centered element `a_v`.
    pub witness: Option<AlgebraElement>,
    pub hecke_q: Option<f64>,
}

impl VertexData {
    pub fn new(algebra: FiniteDimAlgebra, state: StateSpec, witness: Option<AlgebraElement>) -> Result<Self> {
        let rep = gns(&algebra, &state)?;
        if let Some(w) = &witness {
            algebra.check(w)?;
        }
        Ok(VertexData { algebra, state, rep, witness, hecke_q: None })
    }

    pub fn hecke(q: f64) -> Result<Self> {
        let h = hecke_vertex(q)?;
        Ok(VertexData { rep: h.rep(), algebra: h.algebra, state: h.state, witness: None, hecke_q: Some(q) })
    }

    /// `M_d` with the normalized trace.
    pub fn matrix_trace(d: usize) -> Result<Self> {
        let alg = FiniteDimAlgebra::new(vec![d])?;
        let st = StateSpec::uniform_trace(&alg);
        Self::new(alg, st, None)
    }

    /// `ℂ^m` with the given weights.
    pub fn commutative(weights: &[f64]) -> Result<Self> {
        let alg = FiniteDimAlgebra::new(vec![1; weights.len()])?;
        let st = StateSpec::new(&alg, StateSpec::weights(weights).densities)?;
        Self::new(alg, st, None)
    }

    pub fn with_witness(mut self, w: AlgebraElement) -> Result<Self> {
        self.algebra.check(&w)?;
        self.witness = Some(w);
        Ok(self)
    }

    /// The supplied witness is a unitary in the kernel of the state commuting
    /// with the density.
    pub fn witness_is_central_unitary(&self) -> bool {
        self.witness.as_ref().is_some_and(|u| {
            u.is_unitary(1e-10) && self.state.eval(u).norm() <= CENTERED_TOL && is_central(&self.state, u)
        })
    }

    /// `(a_v, q_v)`: the supplied witness, or the best of the centered matrix
    /// units and the centered unitary found by search.
    pub fn element_and_q(&self) -> Result<(AlgebraElement, f64, &'static str)> {
        if let Some(w) = &self.witness {
            let q = optimal_q(&self.algebra, &self.state, w)?;
            return Ok((w.clone(), q, "supplied"));
        }
        let mut cands: Vec<AlgebraElement> =
            self.algebra.basis().iter().map(|b| centered(&self.algebra, &self.state, b)).collect();
        if let Some(u) = centered_unitary_search(&self.algebra, &self.state) {
            cands.push(u.unitary);
        }
        let mut best: Option<(AlgebraElement, f64)> = None;
        for a in cands {
            if a.norm() < 1e-12 {
                continue;
            }
            if let Ok(q) = optimal_q(&self.algebra, &self.state, &a) {
                if best.as_ref().is_none_or(|(_, b)| q > *b + 1e-14) {
                    best = Some((a, q));
                }
            }
        }
        best.map(|(a, q)| (a, q, "searched"))
            .ok_or_else(|| Error::InvalidInput("no nonzero centered element".into()))
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub graph: SimplicialGraph,
    pub vertices: Vec<VertexData>,
}

impl Problem {
    pub fn new(graph: SimplicialGraph, vertices: Vec<VertexData>) -> Result<Self> {
        if graph.len() != vertices.len() {
            return Err(Error::InvalidInput(format!(
                "{} vertex algebras for {} vertices",
                vertices.len(),
                graph.len()
            )));
        }
        Ok(Problem { graph, vertices })
    }

    pub fn vertex(&self, v: VertexId) -> &VertexData {
        &self.vertices[v.index()]
    }

    pub fn reps(&self) -> Vec<GnsRep> {
        self.vertices.iter().map(|v| v.rep.clone()).collect()
    }

    pub fn fock(&self, depth: usize, cap: usize) -> Result<Arc<TruncatedFock>> {
        build_fock_capped(&self.graph, self.reps(), depth, cap)
    }

    pub fn induced(&self, vs: &[VertexId]) -> Problem {
        let sub = self.graph.induced(vs);
        let vertices = sub.embedding.iter().map(|v| self.vertices[v.index()].clone()).collect();
        Problem { graph: sub.graph, vertices }
    }

    pub fn all_tracial(&self) -> bool {
        self.vertices.iter().all(|v| v.state.is_tracial(1e-12))
    }
}
