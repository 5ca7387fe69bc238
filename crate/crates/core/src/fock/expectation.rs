//! Conditional expectations: onto diagonal operators, by gauge averaging, and
//! onto the algebra of an induced subgraph.

use crate::error::{Error, Result};
use crate::fock::operator::OperatorMatrix;
use crate::fock::space::TruncatedFock;
use crate::graph::VertexId;
use crate::linalg::{SparseMatrix, C64};
use std::f64::consts::PI;

/// `𝔼(x) = Σ_w p_w x p_w`.
pub fn expectation_diag(x: &OperatorMatrix) -> OperatorMatrix {
    let f = x.space().clone();
    let m = x.matrix().filter_map(|r, c, v| (f.word_pos_of(r) == f.word_pos_of(c)).then_some(v));
    diag_result(x, m)
}

fn diag_result(x: &OperatorMatrix, m: SparseMatrix) -> OperatorMatrix {
    if x.is_exact() {
        OperatorMatrix::compression(x.space().clone(), m, 0, 0)
    } else {
        x.with_matrix(m).with_shift(0, 0)
    }
}

/// Average of `U_z x U_z*` over the grid of `m`-th roots of unity in every
/// coordinate. The grid sum factorizes over vertices, so each entry is scaled
/// by `Π_v (1/m) Σ_k ζ^{k Δ_v}` where `Δ_v` is the difference of the number of
/// occurrences of `v` in the row and column words.
pub fn gauge_average(x: &OperatorMatrix, m: usize) -> Result<OperatorMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("grid order must be at least 1".into()));
    }
    let f = x.space().clone();
    let n = f.graph().len();
    let counts: Vec<Vec<i64>> =
        f.words().iter().map(|w| w.letter_counts(n).into_iter().map(|c| c as i64).collect()).collect();
    let root_average = |delta: i64| -> C64 {
        let s: C64 = (0..m).map(|k| C64::from_polar(1.0, 2.0 * PI * (k as f64) * (delta as f64) / m as f64)).sum();
        s / m as f64
    };
    let mat = x.matrix().filter_map(|r, c, v| {
        let (cr, cc) = (&counts[f.word_pos_of(r)], &counts[f.word_pos_of(c)]);
        let factor: C64 = cr.iter().zip(cc).map(|(a, b)| root_average(a - b)).product();
        Some(v * factor)
    });
    Ok(x.with_matrix(mat))
}

/// `𝔼_{Γ,Γ₀}(x) = ι(S* x S)` for the induced subgraph on `mask`. The
/// compression `S* x S` keeps the entries between words over `Γ₀`; `ι` lets
/// the result act on the `Γ₀`-prefix of each word and leaves the remaining
/// legs untouched.
pub fn expectation_subgraph(x: &OperatorMatrix, sub: &[VertexId]) -> Result<OperatorMatrix> {
    let f = x.space().clone();
    let g = f.graph();
    for v in sub {
        g.check_vertex(*v)?;
    }
    let mask = sub.iter().fold(0u32, |m, v| m | v.bit());
    let in_sub: Vec<bool> = f.words().iter().map(|w| w.support() & !mask == 0).collect();
    // columns of S* x S, with conjugated values from the adjoint's rows
    let xt = x.matrix().adjoint();
    let n = f.depth();
    let mut t = Vec::new();
    for col in 0..f.dim() {
        let (pre, pre_slots, rest, rest_slots) = split_prefix(&f, col, mask);
        let pre_col = f.canonical_index(&pre, &pre_slots).expect("prefix lies in the space");
        for (row, v) in xt.row(pre_col) {
            if !in_sub[f.word_pos_of(row)] {
                continue;
            }
            let w0 = f.word_of(row).letters();
            if w0.len() + rest.len() > n {
                continue;
            }
            let mut letters = w0.to_vec();
            letters.extend_from_slice(&rest);
            let mut slots = f.slots_of(row);
            slots.extend_from_slice(&rest_slots);
            let r = f.canonical_index(&letters, &slots).expect("recombined word is reduced");
            t.push((r, col, v.conj()));
        }
    }
    let m = SparseMatrix::from_triplets(f.dim(), f.dim(), t);
    let (lo, hi) = x.shift();
    if x.is_exact() {
        Ok(OperatorMatrix::compression(f.clone(), m, lo, hi))
    } else {
        // the guard of a product never exceeds N - hi, so it carries over
        Ok(x.with_matrix(m))
    }
}

/// Peels the letters of basis vector `i` that lie in `mask` from the front,
/// keeping each letter with its slot.
pub(crate) fn split_prefix(f: &TruncatedFock, i: usize, mask: u32) -> (Vec<VertexId>, Vec<usize>, Vec<VertexId>, Vec<usize>) {
    let mut rest: Vec<VertexId> = f.word_of(i).letters().to_vec();
    let mut rest_slots = f.slots_of(i);
    let mut pre = Vec::new();
    let mut pre_slots = Vec::new();
    let g = f.graph();
    'outer: loop {
        let mut seen = 0u32;
        for p in 0..rest.len() {
            let s = rest[p];
            if mask & s.bit() != 0 && seen & !g.neighbor_mask(s) == 0 {
                pre.push(rest.remove(p));
                pre_slots.push(rest_slots.remove(p));
                continue 'outer;
            }
            seen |= s.bit();
        }
        break;
    }
    (pre, pre_slots, rest, rest_slots)
}
