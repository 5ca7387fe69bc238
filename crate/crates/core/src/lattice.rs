//! The projections `P_w` on `ℓ²(W_Γ)`, the action of `W_Γ` on the symbols
//! `Q_w`, and the search for the walks used in the topological freeness
//! argument.

use crate::coxeter::{CoxeterGroup, NormalForm};
use crate::error::{Error, Result};
use crate::fock::ops::{lambda_op, q_projection_lattice};
use crate::fock::space::TruncatedFock;
use crate::fock::OperatorMatrix;
use crate::graph::{VertexId, Walk};
use crate::linalg::SparseMatrix;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Indicator of `{u : w ≤ u}` on the ball of radius `depth`, in ball order.
/// `P_e` is the identity.
pub fn lattice_projection(group: &CoxeterGroup, w: &NormalForm, depth: usize) -> Result<Vec<bool>> {
    Ok(group.ball(depth)?.iter().map(|u| group.starts_with(w, u)).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeCheck {
    pub u: String,
    pub w: String,
    pub join: Option<String>,
    pub max_deviation: f64,
    /// The ball is too small to contain every common upper bound.
    pub inconclusive: bool,
}

/// Compares `P_u P_w` with `P_{u∨w}` (zero when the join does not exist) on
/// the ball of radius `depth`.
pub fn lattice_product(group: &CoxeterGroup, u: &NormalForm, w: &NormalForm, depth: usize) -> Result<LatticeCheck> {
    let ball = group.ball(depth)?;
    let join = group.join(u, w);
    let mut dev: f64 = 0.0;
    for x in &ball {
        let lhs = (group.starts_with(u, x) && group.starts_with(w, x)) as u8 as f64;
        let rhs = join.as_ref().is_some_and(|j| group.starts_with(j, x)) as u8 as f64;
        dev = dev.max((lhs - rhs).abs());
    }
    let g = group.graph();
    Ok(LatticeCheck {
        u: word_string(g, u),
        w: word_string(g, w),
        join: join.as_ref().map(|j| word_string(g, j)),
        max_deviation: dev,
        inconclusive: u.len() + w.len() > depth,
    })
}

pub fn word_string(g: &crate::graph::SimplicialGraph, w: &NormalForm) -> String {
    if w.is_identity() {
        return "e".into();
    }
    w.letters().iter().map(|s| g.label(*s)).collect::<Vec<_>>().join("")
}

/// Formal integer combination of symbols `Q_w`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QSymbolic(pub BTreeMap<NormalForm, i32>);

impl QSymbolic {
    pub fn single(w: NormalForm) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, 1);
        QSymbolic(m)
    }

    pub fn add(&mut self, w: NormalForm, c: i32) {
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn scaled_add(&mut self, other: &QSymbolic, c: i32) {
        for (w, k) in &other.0 {
            self.add(w.clone(), c * k);
        }
    }

    /// Matrix on a Fock space with the lattice convention `Q_e = 1`.
    pub fn to_matrix(&self, f: &Arc<TruncatedFock>) -> Result<OperatorMatrix> {
        let mut acc = OperatorMatrix::zero(f.clone());
        for (w, &c) in &self.0 {
            acc = acc.add_scaled(crate::linalg::C64::new(c as f64, 0.0), &q_projection_lattice(f, w)?)?;
        }
        Ok(acc)
    }

    pub fn display(&self, g: &crate::graph::SimplicialGraph) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, &c)) in self.0.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                s.push(' ');
            }
            s.push_str(sign);
            if i > 0 {
                s.push(' ');
            }
            if c.abs() != 1 {
                s.push_str(&format!("{}", c.abs()));
            }
            s.push_str(&format!("Q_{}", word_string(g, w)));
        }
        s
    }
}

impl Ord for QSymbolic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().cmp(other.0.iter())
    }
}

impl PartialOrd for QSymbolic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ActionCase {
    /// `w` does not commute with `v`.
    NotCentralizing,
    /// `w` commutes with `v` and `v ≤ w`.
    CentralizingAbove,
    /// `w` commutes with `v` and `v ≰ w`.
    CentralizingBelow,
}

pub fn action_case(group: &CoxeterGroup, v: VertexId, w: &NormalForm) -> ActionCase {
    if !group.commutes_with(w, v) {
        ActionCase::NotCentralizing
    } else if group.first_letters_mask(w) & v.bit() != 0 {
        ActionCase::CentralizingAbove
    } else {
        ActionCase::CentralizingBelow
    }
}

/// `v.Q_w`.
pub fn act_on_q(group: &CoxeterGroup, v: VertexId, w: &NormalForm) -> QSymbolic {
    let vw = group.left_mul_gen(v, w);
    match action_case(group, v, w) {
        ActionCase::NotCentralizing => QSymbolic::single(vw),
        ActionCase::CentralizingAbove => {
            let mut q = QSymbolic::single(vw);
            q.add(w.clone(), -1);
            q
        }
        ActionCase::CentralizingBelow => QSymbolic::single(w.clone()),
    }
}

/// Extends the action linearly, with `v.Q_e = Q_e`.
pub fn act_on_symbolic(group: &CoxeterGroup, v: VertexId, q: &QSymbolic) -> QSymbolic {
    let mut out = QSymbolic::default();
    for (w, &c) in &q.0 {
        out.scaled_add(&act_on_q(group, v, w), c);
    }
    out
}

/// `U Q U*` for the left translation `U = λ_v(T_v)` of a Fock space whose
/// vertices are Hecke algebras at `q = 1`.
pub fn conjugate_by_translation(f: &Arc<TruncatedFock>, v: VertexId, x: &OperatorMatrix) -> Result<OperatorMatrix> {
    let rep = f.rep(v);
    if !rep.is_hecke() {
        return Err(Error::InvalidInput("translation needs a Hecke vertex".into()));
    }
    let t = crate::vertex::hecke_vertex(1.0)?.generator;
    let u = lambda_op(f, v, &t)?;
    u.mul(x)?.mul(&u.adjoint())
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentificationCheck {
    pub pairs_checked: usize,
    pub mismatches: usize,
}

/// `⟨P_w δ_u, δ_u⟩ = ⟨Q_w η_u, η_u⟩` for all `u, w` in the ball, with `η_u`
/// the tensor product of the first basis vector of each `ℋ_{u_i}°`.
pub fn identification_check(f: &Arc<TruncatedFock>) -> Result<IdentificationCheck> {
    let group = f.group();
    let words = f.words().to_vec();
    let mut checked = 0;
    let mut bad = 0;
    for w in &words {
        let q = q_projection_lattice(f, w)?;
        for u in &words {
            let eta = f
                .position(u, &vec![1; u.len()])
                .ok_or_else(|| Error::InvalidInput("a vertex space has no centered vector".into()))?;
            let lhs = group.starts_with(w, u) as u8 as f64;
            let rhs = q.matrix().get(eta, eta).re;
            checked += 1;
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    Ok(IdentificationCheck { pairs_checked: checked, mismatches: bad })
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkCertificate {
    pub power: usize,
    pub length_additive: bool,
    /// One flag per element of `S \ {e}`: `wvg^L ≰ x wvg^L`.
    pub non_prefix: Vec<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopofreeWitness {
    pub v: String,
    pub walk: Vec<String>,
    pub certificates: Vec<WalkCertificate>,
    #[serde(skip)]
    pub v_word: NormalForm,
    #[serde(skip)]
    pub walk_steps: Vec<VertexId>,
}

#[derive(Debug, Clone, Serialize)]
pub enum TopofreeOutcome {
    Found(TopofreeWitness),
    /// No candidate within the search radius passed; this does not refute
    /// topological freeness.
    Inconclusive { radius: usize },
}

/// Searches `v` in ball order up to `radius` together with a closed walk in
/// the complement covering every vertex, rotated to end at a last letter of
/// `w v`, such that lengths add up and `w v g^L` is not a prefix of
/// `x w v g^L` for `x ∈ S \ {e}` and `1 ≤ L ≤ max_power`.
pub fn topofree_witness(
    group: &CoxeterGroup,
    w: &NormalForm,
    s: &[NormalForm],
    max_power: usize,
    radius: usize,
) -> Result<TopofreeOutcome> {
    let g = group.graph();
    if g.len() < 3 {
        return Err(Error::InvalidGraph("topological freeness needs at least three vertices".into()));
    }
    let gc = g.complement();
    if !gc.is_connected() {
        return Err(Error::InvalidGraph("the complement graph is not connected".into()));
    }
    let xs: Vec<&NormalForm> = s.iter().filter(|x| !x.is_identity()).collect();
    let base = gc.closed_covering_walk(None).expect("connected complement has a covering walk");
    for v in group.ball(radius)? {
        let wv = group.multiply(w, &v);
        if wv.len() != w.len() + v.len() {
            continue;
        }
        let walk = rotate_to_end(&base, group.last_letters_mask(&wv));
        if let Some(certs) = certify_walk(group, &wv, &walk, &xs, max_power) {
            return Ok(TopofreeOutcome::Found(TopofreeWitness {
                v: word_string(g, &v),
                walk: walk.steps.iter().map(|t| g.label(*t).to_string()).collect(),
                certificates: certs,
                v_word: v,
                walk_steps: walk.steps.clone(),
            }));
        }
    }
    Ok(TopofreeOutcome::Inconclusive { radius })
}

fn rotate_to_end(walk: &Walk, last_mask: u32) -> Walk {
    let n = walk.len();
    (0..n)
        .map(|k| walk.rotated(k))
        .find(|r| r.steps.last().is_some_and(|t| last_mask & t.bit() != 0))
        .unwrap_or_else(|| walk.clone())
}

/// Per-power certificates, or `None` when some check fails.
pub fn certify_walk(
    group: &CoxeterGroup,
    wv: &NormalForm,
    walk: &Walk,
    xs: &[&NormalForm],
    max_power: usize,
) -> Option<Vec<WalkCertificate>> {
    let mut certs = Vec::with_capacity(max_power);
    for l in 1..=max_power {
        let mut letters = Vec::with_capacity(walk.len() * l);
        for _ in 0..l {
            letters.extend_from_slice(&walk.steps);
        }
        let gl = group.reduce_unchecked(&letters);
        let y = group.multiply(wv, &gl);
        let additive = y.len() == wv.len() + gl.len();
        let non_prefix: Vec<bool> = xs.iter().map(|x| !group.starts_with(&y, &group.multiply(x, &y))).collect();
        let ok = additive && non_prefix.iter().all(|&b| b);
        certs.push(WalkCertificate { power: l, length_additive: additive, non_prefix });
        if !ok {
            return None;
        }
    }
    Some(certs)
}

/// Diagonal matrix of `P_w` on a ball, for callers that want matrices.
pub fn lattice_matrix(group: &CoxeterGroup, w: &NormalForm, depth: usize) -> Result<SparseMatrix> {
    let d: Vec<_> = lattice_projection(group, w, depth)?
        .into_iter()
        .map(|b| if b { crate::linalg::ONE } else { crate::linalg::ZERO })
        .collect();
    Ok(SparseMatrix::diagonal(&d))
}

impl fmt::Display for ActionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ActionCase::NotCentralizing => "w not in C(v)",
            ActionCase::CentralizingAbove => "w in C(v), v <= w",
            ActionCase::CentralizingBelow => "w in C(v), v not <= w",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::build_fock;
    use crate::graph::SimplicialGraph;
    use crate::vertex::hecke_vertex;

    #[test]
    fn products_of_generators() {
        let g = CoxeterGroup::new(SimplicialGraph::path(3));
        let (a, b, c) = (g.generator(VertexId(0)), g.generator(VertexId(1)), g.generator(VertexId(2)));
        assert_eq!(lattice_product(&g, &a, &a, 4).unwrap().max_deviation, 0.0);
        let ab = lattice_product(&g, &a, &b, 4).unwrap();
        assert_eq!(ab.join.as_deref(), Some("ab"));
        assert_eq!(ab.max_deviation, 0.0);
        let ac = lattice_product(&g, &a, &c, 4).unwrap();
        assert_eq!(ac.join, None);
        assert_eq!(ac.max_deviation, 0.0);
        assert!(lattice_product(&g, &a, &c, 1).unwrap().inconclusive);
    }

    #[test]
    fn action_examples() {
        let g = CoxeterGroup::new(SimplicialGraph::path(3));
        let (a, b, c) = (VertexId(0), VertexId(1), VertexId(2));
        let wc = g.generator(c);
        assert_eq!(act_on_q(&g, a, &wc), QSymbolic::single(g.reduce(&[a, c]).unwrap()));
        let mut want = QSymbolic::single(NormalForm::identity());
        want.add(g.generator(a), -1);
        assert_eq!(act_on_q(&g, a, &g.generator(a)), want);
        assert_eq!(act_on_q(&g, a, &g.generator(b)), QSymbolic::single(g.generator(b)));
    }

    #[test]
    fn action_matches_translation() {
        let gr = SimplicialGraph::path(3);
        let reps = (0..3).map(|_| hecke_vertex(1.0).unwrap().rep()).collect();
        let f = build_fock(&gr, reps, 5).unwrap();
        let g = f.group().clone();
        for w in g.ball(2).unwrap() {
            for v in gr.vertices() {
                let lhs = conjugate_by_translation(&f, v, &q_projection_lattice(&f, &w).unwrap()).unwrap();
                let rhs = act_on_q(&g, v, &w).to_matrix(&f).unwrap();
                assert!(lhs.guarded_deviation(&rhs).unwrap() < 1e-12, "{v:?} {w:?}");
            }
        }
    }

    #[test]
    fn edgeless_witness() {
        let g = CoxeterGroup::new(SimplicialGraph::edgeless(3));
        let a = g.generator(VertexId(0));
        match topofree_witness(&g, &NormalForm::identity(), &[a], 4, 3).unwrap() {
            TopofreeOutcome::Found(w) => assert_eq!(w.certificates.len(), 4),
            TopofreeOutcome::Inconclusive { .. } => panic!("no witness"),
        }
        let k3 = CoxeterGroup::new(SimplicialGraph::complete(3));
        assert!(topofree_witness(&k3, &NormalForm::identity(), &[], 2, 2).is_err());
    }
}
