//! Concrete operators: `λ_v`, `ρ_v`, the projections `Q_w` and `p_w`,
//! creation, diagonal and annihilation operators, and gauge unitaries.

use crate::coxeter::NormalForm;
use crate::error::{Error, Result};
use crate::fock::operator::OperatorMatrix;
use crate::fock::space::TruncatedFock;
use crate::graph::VertexId;
use crate::linalg::{SparseMatrix, C64, ONE, ZERO};
use crate::vertex::AlgebraElement;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn check_element(f: &TruncatedFock, v: VertexId, x: &AlgebraElement) -> Result<()> {
    f.graph().check_vertex(v)?;
    f.rep(v).algebra().check(x)
}

fn leg_operator(f: &Arc<TruncatedFock>, v: VertexId, x: &AlgebraElement, side: Side) -> Result<OperatorMatrix> {
    check_element(f, v, x)?;
    let g = f.rep(v).left_mult(x);
    let d = g.nrows();
    let group = f.group();
    let n = f.depth();
    let mut t = Vec::new();
    for col in 0..f.dim() {
        let word = f.word_of(col).letters().to_vec();
        let slots = f.slots_of(col);
        let pos = match side {
            Side::Left => group.front_position(&word, v),
            Side::Right => group.back_position(&word, v),
        };
        match pos {
            Some(p) => {
                let k = slots[p];
                let mut sl = slots.clone();
                for j in 1..d {
                    let c = g[(j, k)];
                    if c != ZERO {
                        sl[p] = j;
                        let row = f.position_in(f.word_pos_of(col), &sl).expect("slot in range");
                        t.push((row, col, c));
                    }
                }
                let c = g[(0, k)];
                if c != ZERO {
                    let mut w2 = word.clone();
                    let mut s2 = slots.clone();
                    w2.remove(p);
                    s2.remove(p);
                    let row = f.canonical_index(&w2, &s2).expect("shorter word is in the space");
                    t.push((row, col, c));
                }
            }
            None => {
                if g[(0, 0)] != ZERO {
                    t.push((col, col, g[(0, 0)]));
                }
                if word.len() < n {
                    for j in 1..d {
                        let c = g[(j, 0)];
                        if c == ZERO {
                            continue;
                        }
                        let (w2, s2) = match side {
                            Side::Left => {
                                let mut w2 = vec![v];
                                w2.extend_from_slice(&word);
                                let mut s2 = vec![j];
                                s2.extend_from_slice(&slots);
                                (w2, s2)
                            }
                            Side::Right => {
                                let mut w2 = word.clone();
                                w2.push(v);
                                let mut s2 = slots.clone();
                                s2.push(j);
                                (w2, s2)
                            }
                        };
                        let row = f.canonical_index(&w2, &s2).expect("longer word is in the space");
                        t.push((row, col, c));
                    }
                }
            }
        }
    }
    let m = SparseMatrix::from_triplets(f.dim(), f.dim(), t);
    Ok(OperatorMatrix::compression(f.clone(), m, -1, 1))
}

/// Compression of `λ_v(x)`.
pub fn lambda_op(f: &Arc<TruncatedFock>, v: VertexId, x: &AlgebraElement) -> Result<OperatorMatrix> {
    leg_operator(f, v, x, Side::Left)
}

/// Compression of `ρ_v(x)`, acting on the last leg.
pub fn rho_op(f: &Arc<TruncatedFock>, v: VertexId, x: &AlgebraElement) -> Result<OperatorMatrix> {
    leg_operator(f, v, x, Side::Right)
}

/// Per basis vector: whether its word starts with `v`.
fn starts_with_vertex(f: &TruncatedFock, v: VertexId) -> Vec<bool> {
    let group = f.group();
    let per_word: Vec<bool> = f.words().iter().map(|w| group.first_letters_mask(w) & v.bit() != 0).collect();
    (0..f.dim()).map(|i| per_word[f.word_pos_of(i)]).collect()
}

fn diagonal_op(f: &Arc<TruncatedFock>, keep: impl Fn(usize) -> bool) -> OperatorMatrix {
    let d: Vec<C64> = (0..f.dim()).map(|i| if keep(i) { ONE } else { ZERO }).collect();
    OperatorMatrix::compression(f.clone(), SparseMatrix::diagonal(&d), 0, 0)
}

fn check_word(f: &TruncatedFock, w: &NormalForm) -> Result<()> {
    if w.len() > f.depth() {
        return Err(Error::InvalidInput(format!("word of length {} exceeds depth {}", w.len(), f.depth())));
    }
    for s in w.letters() {
        f.graph().check_vertex(*s)?;
    }
    Ok(())
}

/// `Q_w`: projection onto `⊕_{w ≤ u, u ≠ e} ℋ_u°`. In particular `Q_e = 1 - P_Ω`.
pub fn q_projection(f: &Arc<TruncatedFock>, w: &NormalForm) -> Result<OperatorMatrix> {
    check_word(f, w)?;
    let group = f.group();
    let per_word: Vec<bool> = f.words().iter().map(|u| !u.is_identity() && group.starts_with(w, u)).collect();
    Ok(diagonal_op(f, |i| per_word[f.word_pos_of(i)]))
}

/// The lattice version of `Q_w`: projection onto `⊕_{w ≤ u} ℋ_u°`, so that
/// `Q_e = 1`.
pub fn q_projection_lattice(f: &Arc<TruncatedFock>, w: &NormalForm) -> Result<OperatorMatrix> {
    check_word(f, w)?;
    let group = f.group();
    let per_word: Vec<bool> = f.words().iter().map(|u| group.starts_with(w, u)).collect();
    Ok(diagonal_op(f, |i| per_word[f.word_pos_of(i)]))
}

/// `p_w`: projection onto `ℋ_w°` (onto `ℂΩ` for `w = e`).
pub fn p_word(f: &Arc<TruncatedFock>, w: &NormalForm) -> Result<OperatorMatrix> {
    check_word(f, w)?;
    let wp = f.word_position(w).expect("word within depth");
    Ok(diagonal_op(f, |i| f.word_pos_of(i) == wp))
}

/// Projection onto word lengths in `lo..=hi`.
pub fn p_lengths(f: &Arc<TruncatedFock>, lo: usize, hi: usize) -> OperatorMatrix {
    diagonal_op(f, |i| (lo..=hi).contains(&f.length_of(i)))
}

fn cut(f: &Arc<TruncatedFock>, v: VertexId, a: &AlgebraElement, rows_in: bool, cols_in: bool, lo: i64, hi: i64) -> Result<OperatorMatrix> {
    let l = lambda_op(f, v, a)?;
    let sw = starts_with_vertex(f, v);
    let m = l.matrix().filter_map(|r, c, x| (sw[r] == rows_in && sw[c] == cols_in).then_some(x));
    Ok(OperatorMatrix::compression(f.clone(), m, lo, hi))
}

/// `a† = Q_v a Q_v^⊥`.
pub fn creation(f: &Arc<TruncatedFock>, v: VertexId, a: &AlgebraElement) -> Result<OperatorMatrix> {
    cut(f, v, a, true, false, 1, 1)
}

/// `𝔡(a) = Q_v a Q_v`.
pub fn diagonal(f: &Arc<TruncatedFock>, v: VertexId, a: &AlgebraElement) -> Result<OperatorMatrix> {
    cut(f, v, a, true, true, 0, 0)
}

/// `((a*)†)* = Q_v^⊥ a Q_v`.
pub fn annihilation(f: &Arc<TruncatedFock>, v: VertexId, a: &AlgebraElement) -> Result<OperatorMatrix> {
    cut(f, v, a, false, true, -1, -1)
}

/// `(a†)* = Q_v^⊥ a* Q_v`.
pub fn creation_adjoint(f: &Arc<TruncatedFock>, v: VertexId, a: &AlgebraElement) -> Result<OperatorMatrix> {
    annihilation(f, v, &a.adjoint())
}

/// `z_w = Π z_{w_i}`.
pub fn gauge_character(w: &NormalForm, z: &[C64]) -> C64 {
    w.letters().iter().map(|s| z[s.index()]).product()
}

/// `U_z`: multiplication by `z_w` on `ℋ_w°`.
pub fn gauge_unitary(f: &Arc<TruncatedFock>, z: &[C64]) -> Result<OperatorMatrix> {
    if z.len() != f.graph().len() {
        return Err(Error::InvalidInput(format!("{} gauge phases for {} vertices", z.len(), f.graph().len())));
    }
    if let Some(x) = z.iter().find(|x| (x.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidInput(format!("gauge phase {x} is not unimodular")));
    }
    let per_word: Vec<C64> = f.words().iter().map(|w| gauge_character(w, z)).collect();
    let d: Vec<C64> = (0..f.dim()).map(|i| per_word[f.word_pos_of(i)]).collect();
    Ok(OperatorMatrix::compression(f.clone(), SparseMatrix::diagonal(&d), 0, 0))
}

/// `U_z x U_z*`, computed entrywise.
pub fn gauge_conjugate(x: &OperatorMatrix, z: &[C64]) -> Result<OperatorMatrix> {
    let f = x.space().clone();
    if z.len() != f.graph().len() {
        return Err(Error::InvalidInput("gauge phase count mismatch".into()));
    }
    let per_word: Vec<C64> = f.words().iter().map(|w| gauge_character(w, z)).collect();
    let m = x.matrix().filter_map(|r, c, v| Some(v * per_word[f.word_pos_of(r)] * per_word[f.word_pos_of(c)].conj()));
    Ok(x.with_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::build_fock;
    use crate::graph::SimplicialGraph;
    use crate::vertex::{gns, hecke_vertex, FiniteDimAlgebra, StateSpec};

    fn hecke_space(g: &SimplicialGraph, q: f64, n: usize) -> Arc<TruncatedFock> {
        let reps = (0..g.len()).map(|_| hecke_vertex(q).unwrap().rep()).collect();
        build_fock(g, reps, n).unwrap()
    }

    fn basis_vec(f: &TruncatedFock, i: usize) -> Vec<C64> {
        let mut x = vec![ZERO; f.dim()];
        x[i] = ONE;
        x
    }

    #[test]
    fn hecke_generator_on_vacuum_and_letter() {
        let g = SimplicialGraph::edgeless(3);
        let q = 2.0;
        let f = hecke_space(&g, q, 3);
        let h = hecke_vertex(q).unwrap();
        let s = VertexId(0);
        let t = lambda_op(&f, s, &h.generator).unwrap();
        let y = t.apply(&basis_vec(&f, 0));
        let ws = f.position(&f.group().generator(s), &[1]).unwrap();
        for (i, v) in y.iter().enumerate() {
            let want = if i == ws { 1.0 } else { 0.0 };
            assert!((v - C64::new(want, 0.0)).norm() < 1e-14);
        }
        let y = t.apply(&basis_vec(&f, ws));
        assert!((y[0] - ONE).norm() < 1e-14);
        assert!((y[ws] - C64::new(h.p, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_maps_to_identity() {
        let g = SimplicialGraph::path(3);
        let f = hecke_space(&g, 0.5, 3);
        let one = f.rep(VertexId(1)).algebra().one();
        let l = lambda_op(&f, VertexId(1), &one).unwrap();
        assert!(l.matrix().sub(&SparseMatrix::identity(f.dim())).max_abs() < 1e-14);
    }

    #[test]
    fn remark_identities() {
        let m2 = FiniteDimAlgebra::new(vec![2]).unwrap();
        let st = StateSpec::new(&m2, vec![crate::linalg::DenseMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.3, 0.0),
            C64::new(0.7, 0.0),
        ]))])
        .unwrap();
        let rep = gns(&m2, &st).unwrap();
        let g = SimplicialGraph::edgeless(2);
        let f = build_fock(&g, vec![rep.clone(), rep.clone()], 2).unwrap();
        let v = VertexId(0);
        let a = m2.matrix_unit(0, 0, 1).add(&m2.matrix_unit(0, 1, 1).scale(C64::new(0.0, 2.0)));
        let b = crate::vertex::centered(&m2, &st, &m2.matrix_unit(0, 1, 0));
        // a† Ω = a°ξ_v at word (v)
        let ad = creation(&f, v, &a).unwrap();
        let y = ad.apply(&basis_vec(&f, 0));
        let av = rep.vector(&crate::vertex::centered(&m2, &st, &a));
        for j in 1..rep.dim() {
            let pos = f.position(&f.group().generator(v), &[j]).unwrap();
            assert!((y[pos] - av[j]).norm() < 1e-13);
        }
        let dd = diagonal(&f, v, &a).unwrap();
        assert!(crate::linalg::vec_norm(&dd.apply(&basis_vec(&f, 0))) < 1e-14);
        // ((a*)†)* (bξ_v ⊗ Ω) = ω(ab) Ω
        let bv = rep.vector(&b);
        let mut x = vec![ZERO; f.dim()];
        for j in 1..rep.dim() {
            x[f.position(&f.group().generator(v), &[j]).unwrap()] = bv[j];
        }
        let ann = annihilation(&f, v, &a).unwrap();
        let y = ann.apply(&x);
        assert!((y[0] - st.eval(&a.mul(&b))).norm() < 1e-13);
    }

    #[test]
    fn gauge_parity() {
        let g = SimplicialGraph::edgeless(2);
        let f = hecke_space(&g, 1.0, 3);
        let u = gauge_unitary(&f, &[C64::new(-1.0, 0.0), ONE]).unwrap();
        for i in 0..f.dim() {
            let count = f.word_of(i).letter_counts(2)[0];
            let want = if count % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(u.matrix().get(i, i), C64::new(want, 0.0));
        }
        assert!(gauge_unitary(&f, &[C64::new(2.0, 0.0), ONE]).is_err());
    }

    #[test]
    fn q_projection_examples() {
        let g = SimplicialGraph::path(3);
        let f = hecke_space(&g, 2.0, 4);
        let grp = f.group();
        let (a, b, c) = (VertexId(0), VertexId(1), VertexId(2));
        let qa = q_projection(&f, &grp.generator(a)).unwrap();
        assert_eq!(qa.matrix().get(0, 0), ZERO);
        let qc = q_projection(&f, &grp.generator(c)).unwrap();
        assert_eq!(qa.mul(&qc).unwrap().matrix().nnz(), 0);
        let qb = q_projection(&f, &grp.generator(b)).unwrap();
        let ab = grp.multiply(&grp.generator(a), &grp.generator(b));
        let qab = q_projection(&f, &ab).unwrap();
        assert_eq!(qa.mul(&qb).unwrap().matrix().sub(qab.matrix()).max_abs(), 0.0);
        assert!(q_projection(&f, &grp.reduce(&[a, c, a, c, a]).unwrap()).is_err());
    }
}
