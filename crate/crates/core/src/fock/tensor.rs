//! Splitting the Fock space of a join `Γ₁ + Γ₂` as `ℋ_{Γ₁} ⊗ ℋ_{Γ₂}`.

use crate::error::{Error, Result};
use crate::fock::ops::lambda_op;
use crate::fock::space::{build_fock, TruncatedFock};
use crate::graph::VertexId;
use crate::linalg::SparseMatrix;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct TensorSplitReport {
    pub dim: usize,
    pub dims: (usize, usize),
    /// The basis map is a bijection onto pairs of total length at most `N`.
    pub bijective: bool,
    pub generators_checked: usize,
    pub max_deviation: f64,
}

struct Side {
    space: Arc<TruncatedFock>,
    /// global vertex index -> local vertex id
    local: HashMap<usize, VertexId>,
}

fn side(f: &TruncatedFock, vs: &[VertexId]) -> Result<Side> {
    let sub = f.graph().induced(vs);
    let reps = sub.embedding.iter().map(|v| f.rep(*v).clone()).collect();
    let space = build_fock(&sub.graph, reps, f.depth())?;
    let local = sub.embedding.iter().enumerate().map(|(i, v)| (v.index(), VertexId(i as u8))).collect();
    Ok(Side { space, local })
}

fn local_index(s: &Side, letters: &[VertexId], slots: &[usize]) -> Option<usize> {
    let l: Vec<VertexId> = letters.iter().map(|v| s.local[&v.index()]).collect();
    s.space.canonical_index(&l, slots)
}

/// Builds the basis map `U` and compares `U λ_v(e) U*` with `λ_v(e) ⊗ 1` or
/// `1 ⊗ λ_v(e)` for every vertex and every matrix unit `e`, on columns of
/// length `< N`.
pub fn tensor_split_check(f: &Arc<TruncatedFock>, first: &[VertexId]) -> Result<TensorSplitReport> {
    let g = f.graph();
    let mask = first.iter().fold(0u32, |m, v| m | v.bit());
    for v in first {
        g.check_vertex(*v)?;
    }
    let second: Vec<VertexId> = g.vertices().filter(|v| mask & v.bit() == 0).collect();
    for a in first {
        for b in &second {
            if !g.adjacent(*a, *b) {
                return Err(Error::InvalidGraph(format!(
                    "{} and {} are not adjacent, so this is not a join decomposition",
                    g.label(*a),
                    g.label(*b)
                )));
            }
        }
    }
    let s1 = side(f, first)?;
    let s2 = side(f, &second)?;
    let d2 = s2.space.dim();
    let mut to_pair = Vec::with_capacity(f.dim());
    let mut from_pair: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..f.dim() {
        let letters = f.word_of(i).letters();
        let slots = f.slots_of(i);
        let (mut l1, mut sl1, mut l2, mut sl2) = (vec![], vec![], vec![], vec![]);
        for (s, k) in letters.iter().zip(slots) {
            if mask & s.bit() != 0 {
                l1.push(*s);
                sl1.push(k);
            } else {
                l2.push(*s);
                sl2.push(k);
            }
        }
        let i1 = local_index(&s1, &l1, &sl1).expect("first factor within depth");
        let i2 = local_index(&s2, &l2, &sl2).expect("second factor within depth");
        to_pair.push((i1, i2));
        from_pair.insert((i1, i2), i);
    }
    let n = f.depth();
    let pairs_in_range = (0..s1.space.dim())
        .flat_map(|i1| (0..d2).map(move |i2| (i1, i2)))
        .filter(|&(i1, i2)| s1.space.length_of(i1) + s2.space.length_of(i2) <= n)
        .count();
    let bijective = from_pair.len() == f.dim() && pairs_in_range == f.dim();

    let keep: Vec<bool> = (0..f.dim()).map(|i| f.length_of(i) < n).collect();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for v in g.vertices() {
        let in_first = mask & v.bit() != 0;
        let (s, lv) = if in_first { (&s1, s1.local[&v.index()]) } else { (&s2, s2.local[&v.index()]) };
        for e in f.rep(v).algebra().basis() {
            let big = lambda_op(f, v, &e)?;
            let small = lambda_op(&s.space, lv, &e)?;
            // columns of the factor operator, read from its adjoint
            let st = small.matrix().adjoint();
            let mut t = Vec::new();
            for (col, &(i1, i2)) in to_pair.iter().enumerate() {
                let src = if in_first { i1 } else { i2 };
                for (r, val) in st.row(src) {
                    let pair = if in_first { (r, i2) } else { (i1, r) };
                    if let Some(&row) = from_pair.get(&pair) {
                        t.push((row, col, val.conj()));
                    }
                }
            }
            let kron = SparseMatrix::from_triplets(f.dim(), f.dim(), t);
            worst = worst.max(big.matrix().sub(&kron).mask_columns(&keep).max_abs());
            checked += 1;
        }
    }
    Ok(TensorSplitReport {
        dim: f.dim(),
        dims: (s1.space.dim(), d2),
        bijective,
        generators_checked: checked,
        max_deviation: worst,
    })
}
