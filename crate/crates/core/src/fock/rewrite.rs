//! Rewriting products of generators into sums of elementary operators
//! `(a_1† ⋯ a_k†) d (b_1† ⋯ b_l†)*`.
//!
//! Terms are built by multiplying generators onto the left, one at a time, and
//! applying the commutation rules between a single generator and the leftmost
//! factors of a term.

use crate::coxeter::{CoxeterGroup, NormalForm};
use crate::error::{Error, Result};
use crate::fock::operator::OperatorMatrix;
use crate::fock::ops::{creation, creation_adjoint, diagonal, lambda_op, q_projection};
use crate::fock::space::TruncatedFock;
use crate::graph::{SimplicialGraph, VertexId};
use crate::linalg::{C64, ONE, ZERO};
use crate::vertex::{centered, AlgebraElement, FiniteDimAlgebra, StateSpec};
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_TERM_CAP: usize = 200_000;

/// One factor of a formal product.
#[derive(Debug, Clone)]
pub enum Generator {
    /// `λ_v(a)`.
    Element(VertexId, AlgebraElement),
    /// `a†`.
    Creation(VertexId, AlgebraElement),
    /// `𝔡(a)`.
    Diagonal(VertexId, AlgebraElement),
    /// `(a†)*`.
    CreationAdjoint(VertexId, AlgebraElement),
    Q(VertexId),
    Scalar(C64),
}

impl Generator {
    pub fn vertex(&self) -> Option<VertexId> {
        match self {
            Generator::Element(v, _)
            | Generator::Creation(v, _)
            | Generator::Diagonal(v, _)
            | Generator::CreationAdjoint(v, _)
            | Generator::Q(v) => Some(*v),
            Generator::Scalar(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Generator::Element(..) => "elem",
            Generator::Creation(..) => "create",
            Generator::Diagonal(..) => "diag",
            Generator::CreationAdjoint(..) => "annihilate",
            Generator::Q(_) => "q",
            Generator::Scalar(_) => "scalar",
        }
    }
}

/// `coeff · (a_1† ⋯ a_k†) · Π_v 𝔡(c_{v,1}) ⋯ 𝔡(c_{v,n}) · (b_1† ⋯ b_l†)*`.
/// Creation and annihilation elements are centered; the diagonal vertices
/// form a clique.
#[derive(Debug, Clone)]
pub struct ElementaryTerm {
    pub coeff: C64,
    pub creations: Vec<(VertexId, AlgebraElement)>,
    pub diagonal: BTreeMap<VertexId, Vec<AlgebraElement>>,
    pub annihilations: Vec<(VertexId, AlgebraElement)>,
}

impl ElementaryTerm {
    pub fn identity() -> Self {
        ElementaryTerm { coeff: ONE, creations: Vec::new(), diagonal: BTreeMap::new(), annihilations: Vec::new() }
    }

    pub fn creation_word(&self) -> Vec<VertexId> {
        self.creations.iter().map(|(v, _)| *v).collect()
    }

    pub fn annihilation_word(&self) -> Vec<VertexId> {
        self.annihilations.iter().map(|(v, _)| *v).collect()
    }

    /// Number of generator factors.
    pub fn len(&self) -> usize {
        self.creations.len() + self.annihilations.len() + self.diagonal.values().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Σ(x) = (u_1 ⋯ u_k)(v_1 ⋯ v_l)^{-1}`.
pub fn signature(g: &SimplicialGraph, term: &ElementaryTerm) -> Result<NormalForm> {
    let grp = CoxeterGroup::new(g.clone());
    let u = term.creation_word();
    let v = term.annihilation_word();
    if !grp.is_reduced(&u) || !grp.is_reduced(&v) {
        return Err(Error::InvalidInput("index words of an elementary term must be reduced".into()));
    }
    let un = grp.reduce(&u)?;
    let vn = grp.reduce(&v)?;
    Ok(grp.multiply(&un, &grp.inverse(&vn)))
}

/// The rewriting rules, with the vertex states they need.
#[derive(Debug, Clone)]
pub struct Rewriter {
    graph: SimplicialGraph,
    group: CoxeterGroup,
    algebras: Vec<FiniteDimAlgebra>,
    states: Vec<StateSpec>,
    term_cap: usize,
    /// Flips the sign of the contraction `(a†)* b† = ω(a* b) Q_v^⊥`; used to
    /// check that the identity checks catch a wrong rule.
    fault_contraction_sign: bool,
}

impl Rewriter {
    pub fn new(f: &TruncatedFock) -> Self {
        Rewriter {
            graph: f.graph().clone(),
            group: f.group().clone(),
            algebras: f.reps().iter().map(|r| r.algebra().clone()).collect(),
            states: f.reps().iter().map(|r| r.state().clone()).collect(),
            term_cap: DEFAULT_TERM_CAP,
            fault_contraction_sign: false,
        }
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn with_fault(mut self, fault: bool) -> Self {
        self.fault_contraction_sign = fault;
        self
    }

    fn omega(&self, v: VertexId, x: &AlgebraElement) -> C64 {
        self.states[v.index()].eval(x)
    }

    fn center(&self, v: VertexId, x: &AlgebraElement) -> AlgebraElement {
        centered(&self.algebras[v.index()], &self.states[v.index()], x)
    }

    fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.graph.adjacent(u, v)
    }

    fn check(&self, g: &Generator) -> Result<()> {
        if let Some(v) = g.vertex() {
            self.graph.check_vertex(v)?;
            let alg = &self.algebras[v.index()];
            match g {
                Generator::Element(_, a)
                | Generator::Creation(_, a)
                | Generator::Diagonal(_, a)
                | Generator::CreationAdjoint(_, a) => alg.check(a)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Expands a product of generators into elementary terms.
    pub fn rewrite(&self, expr: &[Generator]) -> Result<Vec<ElementaryTerm>> {
        for g in expr {
            self.check(g)?;
        }
        let mut terms = vec![ElementaryTerm::identity()];
        for g in expr.iter().rev() {
            let mut next = Vec::with_capacity(terms.len());
            for t in &terms {
                self.left_multiply(g, t, &mut next);
            }
            if next.len() > self.term_cap {
                return Err(Error::Resource(format!("rewriting exceeded {} terms", self.term_cap)));
            }
            terms = next;
        }
        Ok(terms)
    }

    /// Pushes the terms of `g · t` onto `out`.
    pub fn left_multiply(&self, g: &Generator, t: &ElementaryTerm, out: &mut Vec<ElementaryTerm>) {
        match g {
            Generator::Scalar(c) => {
                let mut t = t.clone();
                t.coeff *= c;
                out.push(t);
            }
            Generator::Q(v) => out.extend(self.left_q(*v, t)),
            Generator::Diagonal(v, a) => out.extend(self.left_diag(*v, a, t)),
            Generator::Creation(v, a) => out.extend(self.left_create(*v, &self.center(*v, a), t)),
            Generator::CreationAdjoint(v, a) => self.left_annihilate(*v, &self.center(*v, a), t, out),
            Generator::Element(v, a) => {
                // λ(a) = ω(a) 1 + 𝔡(a°) + (a°)† + (((a°)*)†)*
                let ac = self.center(*v, a);
                let w = self.omega(*v, a);
                if w != ZERO {
                    let mut s = t.clone();
                    s.coeff *= w;
                    out.push(s);
                }
                out.extend(self.left_diag(*v, &ac, t));
                out.extend(self.left_create(*v, &ac, t));
                self.left_annihilate(*v, &ac.adjoint(), t, out);
            }
        }
    }

    /// Multiplies `𝔡(a)` (or `Q_v` for `None`) into the diagonal part; false
    /// when the product vanishes.
    fn merge_diagonal(&self, v: VertexId, a: Option<&AlgebraElement>, t: &mut ElementaryTerm) -> bool {
        if let Some(list) = t.diagonal.get_mut(&v) {
            // Q_v 𝔡(c) = 𝔡(c)
            if let Some(a) = a {
                list.insert(0, a.clone());
            }
            return true;
        }
        if t.diagonal.keys().any(|&w| !self.adjacent(v, w)) {
            return false;
        }
        let a = a.cloned().unwrap_or_else(|| self.algebras[v.index()].one());
        t.diagonal.insert(v, vec![a]);
        true
    }

    fn left_q(&self, v: VertexId, t: &ElementaryTerm) -> Option<ElementaryTerm> {
        for (u, _) in &t.creations {
            if *u == v {
                return Some(t.clone());
            }
            if !self.adjacent(*u, v) {
                return None;
            }
        }
        let mut s = t.clone();
        self.merge_diagonal(v, None, &mut s).then_some(s)
    }

    fn left_diag(&self, v: VertexId, a: &AlgebraElement, t: &ElementaryTerm) -> Option<ElementaryTerm> {
        for (i, (u, ai)) in t.creations.iter().enumerate() {
            if *u == v {
                // 𝔡(a) a_i† = (a a_i - ω(a_i) a)† = ((a a_i)°)†
                let mut s = t.clone();
                s.creations[i].1 = self.center(v, &a.mul(ai));
                return Some(s);
            }
            if !self.adjacent(*u, v) {
                return None;
            }
        }
        let mut s = t.clone();
        self.merge_diagonal(v, Some(a), &mut s).then_some(s)
    }

    fn left_create(&self, v: VertexId, a: &AlgebraElement, t: &ElementaryTerm) -> Option<ElementaryTerm> {
        if self.group.front_position(&t.creation_word(), v).is_some() {
            return None;
        }
        let mut s = t.clone();
        s.creations.insert(0, (v, a.clone()));
        Some(s)
    }

    fn left_annihilate(&self, v: VertexId, a: &AlgebraElement, t: &ElementaryTerm, out: &mut Vec<ElementaryTerm>) {
        for (i, (u, ai)) in t.creations.iter().enumerate() {
            if *u == v {
                // (a†)* a_i† = ω(a* a_i) Q_v^⊥ = ω(a* a_i) (1 - Q_v)
                let mut c = self.omega(v, &a.adjoint().mul(ai));
                if self.fault_contraction_sign {
                    c = -c;
                }
                let mut removed = t.clone();
                removed.creations.remove(i);
                removed.coeff *= c;
                out.push(removed);
                let suffix = ElementaryTerm {
                    coeff: t.coeff * (-c),
                    creations: t.creations[i + 1..].to_vec(),
                    diagonal: t.diagonal.clone(),
                    annihilations: t.annihilations.clone(),
                };
                if let Some(mut s) = self.left_q(v, &suffix) {
                    let mut cr = t.creations[..i].to_vec();
                    cr.extend(s.creations);
                    s.creations = cr;
                    out.push(s);
                }
                return;
            }
            if !self.adjacent(*u, v) {
                return;
            }
        }
        let mut s = t.clone();
        let mut a = a.clone();
        for (&w, list) in &t.diagonal {
            if w == v {
                // (x†)* 𝔡(c) = (((c* x)°)†)* for centered x
                for c in list {
                    a = self.center(v, &c.adjoint().mul(&a));
                }
            } else if !self.adjacent(w, v) {
                return;
            }
        }
        s.diagonal.remove(&v);
        if self.group.back_position(&t.annihilation_word(), v).is_some() {
            return;
        }
        s.annihilations.push((v, a));
        out.push(s);
    }
}

/// Matrix of a single generator.
pub fn generator_matrix(f: &Arc<TruncatedFock>, g: &Generator) -> Result<OperatorMatrix> {
    match g {
        Generator::Element(v, a) => lambda_op(f, *v, a),
        Generator::Creation(v, a) => creation(f, *v, a),
        Generator::Diagonal(v, a) => diagonal(f, *v, a),
        Generator::CreationAdjoint(v, a) => creation_adjoint(f, *v, a),
        Generator::Q(v) => q_projection(f, &f.group().generator(*v)),
        Generator::Scalar(c) => Ok(OperatorMatrix::identity(f.clone()).scale(*c)),
    }
}

/// Matrix of a product of generators, with guard bookkeeping.
pub fn expr_matrix(f: &Arc<TruncatedFock>, expr: &[Generator]) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::identity(f.clone());
    for g in expr {
        acc = acc.mul(&generator_matrix(f, g)?)?;
    }
    Ok(acc)
}

/// Matrix of an elementary term.
pub fn term_matrix(f: &Arc<TruncatedFock>, t: &ElementaryTerm) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::identity(f.clone()).scale(t.coeff);
    for (v, a) in &t.creations {
        acc = acc.mul(&creation(f, *v, a)?)?;
    }
    for (v, list) in &t.diagonal {
        for c in list {
            acc = acc.mul(&diagonal(f, *v, c)?)?;
        }
    }
    for (v, b) in t.annihilations.iter().rev() {
        acc = acc.mul(&creation_adjoint(f, *v, b)?)?;
    }
    Ok(acc)
}

pub fn terms_matrix(f: &Arc<TruncatedFock>, terms: &[ElementaryTerm]) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::zero(f.clone());
    for t in terms {
        acc = acc.add(&term_matrix(f, t)?)?;
    }
    Ok(acc)
}

/// Result of expanding an expression and comparing matrices.
#[derive(Debug, Clone)]
pub struct RewriteCertificate {
    pub terms: Vec<ElementaryTerm>,
    pub deviation: f64,
    pub guard: i64,
}

pub fn rewrite_to_elementary(f: &Arc<TruncatedFock>, expr: &[Generator]) -> Result<RewriteCertificate> {
    certify(f, &Rewriter::new(f), expr)
}

pub fn certify(f: &Arc<TruncatedFock>, rw: &Rewriter, expr: &[Generator]) -> Result<RewriteCertificate> {
    let terms = rw.rewrite(expr)?;
    let lhs = expr_matrix(f, expr)?;
    let rhs = terms_matrix(f, &terms)?;
    let deviation = lhs.guarded_deviation(&rhs)?;
    Ok(RewriteCertificate { terms, deviation, guard: lhs.guard().min(rhs.guard()) })
}

/// A product of `len` generators with random kinds, vertices and elements.
pub fn random_expression<R: Rng>(f: &TruncatedFock, len: usize, rng: &mut R) -> Vec<Generator> {
    let n = f.graph().len();
    (0..len)
        .map(|_| {
            let v = VertexId(rng.random_range(0..n) as u8);
            let a = f.rep(v).algebra().random_element(rng);
            match rng.random_range(0..6) {
                0 | 1 => Generator::Element(v, a),
                2 => Generator::Creation(v, a),
                3 => Generator::Diagonal(v, a),
                4 => Generator::CreationAdjoint(v, a),
                _ => {
                    if rng.random_bool(0.5) {
                        Generator::Q(v)
                    } else {
                        Generator::Scalar(C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::build_fock;
    use crate::vertex::hecke_vertex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(g: &SimplicialGraph, n: usize) -> Arc<TruncatedFock> {
        let reps = (0..g.len()).map(|i| hecke_vertex(0.5 + i as f64).unwrap().rep()).collect();
        build_fock(g, reps, n).unwrap()
    }

    #[test]
    fn plain_element_splits_in_three() {
        let g = SimplicialGraph::edgeless(2);
        let f = space(&g, 3);
        let h = hecke_vertex(0.5).unwrap();
        // T is centered for the trace, so the scalar part vanishes
        let terms = Rewriter::new(&f).rewrite(&[Generator::Element(VertexId(0), h.generator.clone())]).unwrap();
        assert_eq!(terms.iter().filter(|t| t.coeff.norm() > 1e-12).count(), 3);
        let cert = rewrite_to_elementary(&f, &[Generator::Element(VertexId(0), h.generator)]).unwrap();
        assert!(cert.deviation < 1e-12);
    }

    #[test]
    fn same_vertex_creations_vanish() {
        let g = SimplicialGraph::edgeless(2);
        let f = space(&g, 3);
        let t = hecke_vertex(0.5).unwrap().generator;
        let e = [Generator::Creation(VertexId(0), t.clone()), Generator::Creation(VertexId(0), t)];
        assert!(Rewriter::new(&f).rewrite(&e).unwrap().is_empty());
    }

    #[test]
    fn random_certificates() {
        let g = SimplicialGraph::path(3);
        let f = space(&g, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in 1..=4 {
            for _ in 0..10 {
                let e = random_expression(&f, len, &mut rng);
                let cert = rewrite_to_elementary(&f, &e).unwrap();
                assert!(cert.deviation < 1e-9, "{:?} deviation {}", e.iter().map(|g| g.kind()).collect::<Vec<_>>(), cert.deviation);
            }
        }
    }

    #[test]
    fn signature_examples() {
        let g = SimplicialGraph::edgeless(3);
        let f = space(&g, 3);
        let t = hecke_vertex(0.5).unwrap().generator;
        let v = VertexId(1);
        let term = ElementaryTerm {
            coeff: ONE,
            creations: vec![(v, t.clone())],
            diagonal: BTreeMap::new(),
            annihilations: vec![(v, t)],
        };
        assert!(signature(f.graph(), &term).unwrap().is_identity());
    }
}
