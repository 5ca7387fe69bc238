//! The graph-product Hilbert space truncated at word length `N`.

use crate::coxeter::{CoxeterGroup, NormalForm};
use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, VertexId};
use crate::vertex::GnsRep;
use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

pub const DEFAULT_DIM_CAP: usize = 20_000;

/// A basis vector: a word and one index per letter into `ℋ_{v_i}°`
/// (`1..dim ℋ_{v_i}`; slot 0 is the cyclic vector and never appears).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockIndex {
    pub word: NormalForm,
    pub slots: Vec<usize>,
}

#[derive(Debug)]
pub struct TruncatedFock {
    group: CoxeterGroup,
    reps: Vec<GnsRep>,
    depth: usize,
    words: Vec<NormalForm>,
    word_index: HashMap<NormalForm, usize>,
    offsets: Vec<usize>,
    basis_word: Vec<usize>,
}

/// Builds `ℂΩ ⊕ ⊕_{1≤|w|≤N} ℋ_w°` with the default dimension cap.
pub fn build_fock(g: &SimplicialGraph, reps: Vec<GnsRep>, depth: usize) -> Result<Arc<TruncatedFock>> {
    build_fock_capped(g, reps, depth, DEFAULT_DIM_CAP)
}

pub fn build_fock_capped(g: &SimplicialGraph, reps: Vec<GnsRep>, depth: usize, cap: usize) -> Result<Arc<TruncatedFock>> {
    if reps.len() != g.len() {
        return Err(Error::InvalidInput(format!("{} representations for {} vertices", reps.len(), g.len())));
    }
    let group = CoxeterGroup::new(g.clone());
    let words = group.ball(depth)?;
    let mut offsets = Vec::with_capacity(words.len() + 1);
    let mut total = 0usize;
    for w in &words {
        offsets.push(total);
        let block: usize = w.letters().iter().map(|s| reps[s.index()].dim() - 1).product();
        total += block;
        if total > cap {
            return Err(Error::Resource(format!("Fock dimension exceeds {cap} at depth {depth}")));
        }
    }
    offsets.push(total);
    let word_index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let mut basis_word = Vec::with_capacity(total);
    for i in 0..words.len() {
        basis_word.extend(std::iter::repeat_n(i, offsets[i + 1] - offsets[i]));
    }
    Ok(Arc::new(TruncatedFock { group, reps, depth, words, word_index, offsets, basis_word }))
}

impl TruncatedFock {
    pub fn dim(&self) -> usize {
        self.basis_word.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn graph(&self) -> &SimplicialGraph {
        self.group.graph()
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn reps(&self) -> &[GnsRep] {
        &self.reps
    }

    pub fn rep(&self, v: VertexId) -> &GnsRep {
        &self.reps[v.index()]
    }

    pub fn words(&self) -> &[NormalForm] {
        &self.words
    }

    pub fn word_position(&self, w: &NormalForm) -> Option<usize> {
        self.word_index.get(w).copied()
    }

    /// Basis positions of `ℋ_w°`.
    pub fn block(&self, word_pos: usize) -> Range<usize> {
        self.offsets[word_pos]..self.offsets[word_pos + 1]
    }

    /// Index into `words()` of the word carrying basis vector `i`.
    pub fn word_pos_of(&self, i: usize) -> usize {
        self.basis_word[i]
    }

    pub fn word_of(&self, i: usize) -> &NormalForm {
        &self.words[self.basis_word[i]]
    }

    pub fn length_of(&self, i: usize) -> usize {
        self.word_of(i).len()
    }

    /// Position of `(word, slots)`, mixed radix with the first slot most
    /// significant. `None` when the word is beyond the truncation or a slot is
    /// out of range.
    pub fn position(&self, word: &NormalForm, slots: &[usize]) -> Option<usize> {
        let wp = self.word_position(word)?;
        self.position_in(wp, slots)
    }

    pub fn position_in(&self, word_pos: usize, slots: &[usize]) -> Option<usize> {
        let letters = self.words[word_pos].letters();
        if slots.len() != letters.len() {
            return None;
        }
        let mut idx = 0usize;
        for (s, &k) in letters.iter().zip(slots) {
            let r = self.reps[s.index()].dim() - 1;
            if k == 0 || k > r {
                return None;
            }
            idx = idx * r + (k - 1);
        }
        Some(self.offsets[word_pos] + idx)
    }

    pub fn index_of(&self, f: &FockIndex) -> Option<usize> {
        self.position(&f.word, &f.slots)
    }

    /// Slots of basis vector `i`.
    pub fn slots_of(&self, i: usize) -> Vec<usize> {
        let wp = self.basis_word[i];
        let letters = self.words[wp].letters();
        let mut rem = i - self.offsets[wp];
        let mut slots = vec![0; letters.len()];
        for (k, s) in letters.iter().enumerate().rev() {
            let r = self.reps[s.index()].dim() - 1;
            slots[k] = rem % r + 1;
            rem /= r;
        }
        slots
    }

    pub fn decode(&self, i: usize) -> FockIndex {
        FockIndex { word: self.word_of(i).clone(), slots: self.slots_of(i) }
    }

    /// Positions whose word has length in `lo..=hi`.
    pub fn length_mask(&self, lo: usize, hi: usize) -> Vec<bool> {
        (0..self.dim()).map(|i| (lo..=hi).contains(&self.length_of(i))).collect()
    }

    /// Places the letters of a reduced word together with their slots into
    /// normal-form order.
    pub fn canonical_index(&self, letters: &[VertexId], slots: &[usize]) -> Option<usize> {
        let order = self.group.canonical_order(letters);
        let w: Vec<VertexId> = order.iter().map(|&k| letters[k]).collect();
        let sl: Vec<usize> = order.iter().map(|&k| slots[k]).collect();
        let nf = self.group.normal_form_of_reduced(&w);
        self.position(&nf, &sl)
    }

    /// Whether two spaces carry the same graph, vertex data and depth.
    pub fn same_host(&self, other: &TruncatedFock) -> bool {
        std::ptr::eq(self, other)
            || (self.depth == other.depth
                && self.graph() == other.graph()
                && self.reps.iter().zip(&other.reps).all(|(a, b)| a.dim() == b.dim() && a.state() == b.state()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::{gns, hecke_vertex, FiniteDimAlgebra, StateSpec};

    fn hecke_reps(n: usize, q: f64) -> Vec<GnsRep> {
        (0..n).map(|_| hecke_vertex(q).unwrap().rep()).collect()
    }

    #[test]
    fn dimensions() {
        let g = SimplicialGraph::edgeless(3);
        assert_eq!(build_fock(&g, hecke_reps(3, 2.0), 0).unwrap().dim(), 1);
        assert_eq!(build_fock(&g, hecke_reps(3, 2.0), 2).unwrap().dim(), 10);
        let m2 = FiniteDimAlgebra::new(vec![2]).unwrap();
        let rep = gns(&m2, &StateSpec::uniform_trace(&m2)).unwrap();
        let one = SimplicialGraph::edgeless(1);
        assert_eq!(build_fock(&one, vec![rep.clone()], 1).unwrap().dim(), 4);
        // 1 + 2*3 + 2*9 on the edgeless pair
        let two = SimplicialGraph::edgeless(2);
        assert_eq!(build_fock(&two, vec![rep.clone(), rep], 2).unwrap().dim(), 25);
    }

    #[test]
    fn cap_is_enforced() {
        let g = SimplicialGraph::edgeless(3);
        let err = build_fock_capped(&g, hecke_reps(3, 2.0), 6, 50).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn positions_round_trip() {
        let m2 = FiniteDimAlgebra::new(vec![2]).unwrap();
        let rep = gns(&m2, &StateSpec::uniform_trace(&m2)).unwrap();
        let c2 = FiniteDimAlgebra::new(vec![1, 1]).unwrap();
        let rep2 = gns(&c2, &StateSpec::weights(&[0.3, 0.7])).unwrap();
        let g = SimplicialGraph::path(3);
        let f = build_fock(&g, vec![rep.clone(), rep2, rep], 3).unwrap();
        assert_eq!(f.length_of(0), 0);
        for i in 0..f.dim() {
            assert_eq!(f.index_of(&f.decode(i)), Some(i));
        }
    }
}
