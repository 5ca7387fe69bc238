//! The right-angled Coxeter group of a simplicial graph: word reduction,
//! lexicographic normal forms, the weak orders, joins and meets, and ball
//! enumeration.

use crate::error::{Error, Result};
use crate::graph::{mask_to_vertices, SimplicialGraph, VertexId};
use std::cmp::Ordering;
use std::collections::HashSet;

/// Largest radius accepted by [`CoxeterGroup::ball`].
pub const MAX_BALL_RADIUS: usize = 12;
/// Default element cap for ball enumeration.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// Canonical reduced word: the lexicographically least reduced representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalForm(Vec<VertexId>);

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    pub fn letters(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit mask of the letters occurring in the word.
    pub fn support(&self) -> u32 {
        self.0.iter().fold(0, |m, v| m | v.bit())
    }

    /// Letter multiplicities indexed by vertex.
    pub fn letter_counts(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for v in &self.0 {
            c[v.index()] += 1;
        }
        c
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ball order: shorter first, then lexicographic.
impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    graph: SimplicialGraph,
}

impl CoxeterGroup {
    pub fn new(graph: SimplicialGraph) -> Self {
        CoxeterGroup { graph }
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    pub fn generator(&self, v: VertexId) -> NormalForm {
        NormalForm(vec![v])
    }

    fn check_letters(&self, word: &[VertexId]) -> Result<()> {
        for &v in word {
            self.graph.check_vertex(v)?;
        }
        Ok(())
    }

    /// Deletes cancelling pairs until none is left. The result is reduced but
    /// not yet canonical.
    pub fn cancel(&self, word: &[VertexId]) -> Vec<VertexId> {
        let mut w = word.to_vec();
        'restart: loop {
            for j in 1..w.len() {
                let s = w[j];
                for i in (0..j).rev() {
                    if w[i] == s {
                        w.remove(j);
                        w.remove(i);
                        continue 'restart;
                    }
                    if !self.graph.adjacent(w[i], s) {
                        break;
                    }
                }
            }
            return w;
        }
    }

    /// Order in which the letters of a reduced word appear in its normal form:
    /// `result[k]` is the index in `word` of the k-th normal-form letter.
    pub fn canonical_order(&self, word: &[VertexId]) -> Vec<usize> {
        let mut remaining: Vec<usize> = (0..word.len()).collect();
        let mut order = Vec::with_capacity(word.len());
        while !remaining.is_empty() {
            let mut best: Option<(usize, VertexId)> = None;
            let mut seen = 0u32;
            for (pos, &idx) in remaining.iter().enumerate() {
                let s = word[idx];
                // s can be brought to the front iff every earlier letter is adjacent to it
                let earlier_ok = seen & !self.graph.neighbor_mask(s) == 0;
                if earlier_ok && best.is_none_or(|(_, b)| s < b) {
                    best = Some((pos, s));
                }
                seen |= s.bit();
            }
            let (pos, _) = best.expect("a reduced nonempty word has a first letter");
            order.push(remaining.remove(pos));
        }
        order
    }

    fn canonicalize(&self, word: &[VertexId]) -> NormalForm {
        NormalForm(self.canonical_order(word).into_iter().map(|i| word[i]).collect())
    }

    /// Canonical normal form of an arbitrary word.
    pub fn reduce(&self, word: &[VertexId]) -> Result<NormalForm> {
        self.check_letters(word)?;
        Ok(self.canonicalize(&self.cancel(word)))
    }

    /// Normal form of a word already known to consist of valid letters.
    pub fn reduce_unchecked(&self, word: &[VertexId]) -> NormalForm {
        self.canonicalize(&self.cancel(word))
    }

    /// Normal form of a word already known to be reduced.
    pub fn normal_form_of_reduced(&self, word: &[VertexId]) -> NormalForm {
        self.canonicalize(word)
    }

    pub fn is_reduced(&self, word: &[VertexId]) -> bool {
        self.cancel(word).len() == word.len()
    }

    pub fn multiply(&self, u: &NormalForm, v: &NormalForm) -> NormalForm {
        let mut w = u.0.clone();
        w.extend_from_slice(&v.0);
        self.reduce_unchecked(&w)
    }

    pub fn inverse(&self, w: &NormalForm) -> NormalForm {
        let mut r = w.0.clone();
        r.reverse();
        self.canonicalize(&r)
    }

    pub fn length_of_product(&self, u: &NormalForm, v: &NormalForm) -> usize {
        let mut w = u.0.clone();
        w.extend_from_slice(&v.0);
        self.cancel(&w).len()
    }

    /// `v <= w` in the right weak order: `|v^{-1} w| = |w| - |v|`.
    pub fn starts_with(&self, v: &NormalForm, w: &NormalForm) -> bool {
        if v.len() > w.len() {
            return false;
        }
        let vi = self.inverse(v);
        self.length_of_product(&vi, w) == w.len() - v.len()
    }

    /// `v <=_L w`: `|w v^{-1}| = |w| - |v|`.
    pub fn ends_with(&self, v: &NormalForm, w: &NormalForm) -> bool {
        if v.len() > w.len() {
            return false;
        }
        let vi = self.inverse(v);
        self.length_of_product(w, &vi) == w.len() - v.len()
    }

    /// Position of the occurrence of `s` that can be shuffled to the front of
    /// a reduced word, if any.
    pub fn front_position(&self, word: &[VertexId], s: VertexId) -> Option<usize> {
        let nb = self.graph.neighbor_mask(s);
        for (p, &x) in word.iter().enumerate() {
            if x == s {
                return Some(p);
            }
            if nb & x.bit() == 0 {
                return None;
            }
        }
        None
    }

    /// Position of the occurrence of `s` that can be shuffled to the back.
    pub fn back_position(&self, word: &[VertexId], s: VertexId) -> Option<usize> {
        let nb = self.graph.neighbor_mask(s);
        for (p, &x) in word.iter().enumerate().rev() {
            if x == s {
                return Some(p);
            }
            if nb & x.bit() == 0 {
                return None;
            }
        }
        None
    }

    /// Bit mask of `{ s : s <= w }`.
    pub fn first_letters_mask(&self, w: &NormalForm) -> u32 {
        let mut seen = 0u32;
        let mut out = 0u32;
        for &x in &w.0 {
            if seen & !self.graph.neighbor_mask(x) == 0 {
                out |= x.bit();
            }
            seen |= x.bit();
        }
        out
    }

    /// Bit mask of `{ s : s <=_L w }`.
    pub fn last_letters_mask(&self, w: &NormalForm) -> u32 {
        let mut seen = 0u32;
        let mut out = 0u32;
        for &x in w.0.iter().rev() {
            if seen & !self.graph.neighbor_mask(x) == 0 {
                out |= x.bit();
            }
            seen |= x.bit();
        }
        out
    }

    pub fn first_letters(&self, w: &NormalForm) -> Vec<VertexId> {
        mask_to_vertices(self.first_letters_mask(w))
    }

    pub fn last_letters(&self, w: &NormalForm) -> Vec<VertexId> {
        mask_to_vertices(self.last_letters_mask(w))
    }

    /// `s w` for a generator `s`.
    pub fn left_mul_gen(&self, s: VertexId, w: &NormalForm) -> NormalForm {
        match self.front_position(&w.0, s) {
            Some(p) => {
                let mut r = w.0.clone();
                r.remove(p);
                self.canonicalize(&r)
            }
            None => {
                let mut r = Vec::with_capacity(w.len() + 1);
                r.push(s);
                r.extend_from_slice(&w.0);
                self.canonicalize(&r)
            }
        }
    }

    /// `w s` for a generator `s`.
    pub fn right_mul_gen(&self, w: &NormalForm, s: VertexId) -> NormalForm {
        match self.back_position(&w.0, s) {
            Some(p) => {
                let mut r = w.0.clone();
                r.remove(p);
                self.canonicalize(&r)
            }
            None => {
                let mut r = w.0.clone();
                r.push(s);
                self.canonicalize(&r)
            }
        }
    }

    /// Least common upper bound in the right weak order, by peeling common
    /// first letters.
    pub fn join(&self, v: &NormalForm, w: &NormalForm) -> Option<NormalForm> {
        if v.is_identity() {
            return Some(w.clone());
        }
        if w.is_identity() {
            return Some(v.clone());
        }
        let s = VertexId(self.first_letters_mask(v).trailing_zeros() as u8);
        let sv = self.left_mul_gen(s, v);
        let rest = if self.first_letters_mask(w) & s.bit() != 0 {
            let sw = self.left_mul_gen(s, w);
            self.join(&sv, &sw)?
        } else {
            // s must commute with all of w and not occur in it
            let sup = w.support();
            if sup & s.bit() != 0 || sup & !self.graph.neighbor_mask(s) != 0 {
                return None;
            }
            self.join(&sv, w)?
        };
        Some(self.left_mul_gen(s, &rest))
    }

    /// Greatest common lower bound in the right weak order.
    pub fn meet(&self, v: &NormalForm, w: &NormalForm) -> NormalForm {
        let common = self.first_letters_mask(v) & self.first_letters_mask(w);
        if common == 0 {
            return NormalForm::identity();
        }
        let s = VertexId(common.trailing_zeros() as u8);
        let m = self.meet(&self.left_mul_gen(s, v), &self.left_mul_gen(s, w));
        self.left_mul_gen(s, &m)
    }

    /// Join computed by exhaustive search over the ball of the given radius:
    /// the unique minimal common upper bound, or `None` when there is no
    /// common upper bound inside the ball.
    pub fn join_by_search(&self, v: &NormalForm, w: &NormalForm, radius: usize) -> Result<Option<NormalForm>> {
        let ball = self.ball(radius)?;
        let uppers: Vec<&NormalForm> = ball
            .iter()
            .filter(|u| self.starts_with(v, u) && self.starts_with(w, u))
            .collect();
        let least = uppers
            .iter()
            .find(|c| uppers.iter().all(|u| self.starts_with(c, u)))
            .map(|c| (*c).clone());
        if least.is_none() && !uppers.is_empty() {
            return Err(Error::Numerical(format!(
                "common upper bounds of {:?} and {:?} have no least element within radius {radius}",
                v.0, w.0
            )));
        }
        Ok(least)
    }

    /// Join by peeling, confirmed against the ball search of radius
    /// `|v| + |w|`. Disagreement is reported as an error.
    pub fn join_verified(&self, v: &NormalForm, w: &NormalForm) -> Result<Option<NormalForm>> {
        let peeled = self.join(v, w);
        let searched = self.join_by_search(v, w, v.len() + w.len())?;
        if peeled != searched {
            return Err(Error::Numerical(format!(
                "join of {:?} and {:?}: peeling gives {:?}, search gives {:?}",
                v.0, w.0, peeled, searched
            )));
        }
        Ok(peeled)
    }

    pub fn commutes_with(&self, w: &NormalForm, v: VertexId) -> bool {
        self.left_mul_gen(v, w) == self.right_mul_gen(w, v)
    }

    /// All elements of length at most `radius`, in ball order.
    pub fn ball(&self, radius: usize) -> Result<Vec<NormalForm>> {
        self.ball_capped(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_capped(&self, radius: usize, cap: usize) -> Result<Vec<NormalForm>> {
        if radius > MAX_BALL_RADIUS {
            return Err(Error::Resource(format!("ball radius {radius} exceeds {MAX_BALL_RADIUS}")));
        }
        let mut out = vec![NormalForm::identity()];
        let mut sphere = vec![NormalForm::identity()];
        for _ in 0..radius {
            sphere = self.next_sphere(&sphere);
            if out.len() + sphere.len() > cap {
                return Err(Error::Resource(format!("ball exceeds {cap} elements")));
            }
            out.extend(sphere.iter().cloned());
        }
        Ok(out)
    }

    fn next_sphere(&self, sphere: &[NormalForm]) -> Vec<NormalForm> {
        let mut set: HashSet<NormalForm> = HashSet::new();
        for w in sphere {
            let last = self.last_letters_mask(w);
            for s in self.graph.vertices() {
                if last & s.bit() == 0 {
                    let mut r = w.0.clone();
                    r.push(s);
                    set.insert(self.canonicalize(&r));
                }
            }
        }
        let mut next: Vec<NormalForm> = set.into_iter().collect();
        next.sort();
        next
    }

    /// Number of elements of each length `0..=radius`.
    pub fn sphere_sizes(&self, radius: usize) -> Result<Vec<u64>> {
        self.sphere_sizes_capped(radius, DEFAULT_BALL_CAP)
    }

    pub fn sphere_sizes_capped(&self, radius: usize, cap: usize) -> Result<Vec<u64>> {
        if radius > MAX_BALL_RADIUS {
            return Err(Error::Resource(format!("ball radius {radius} exceeds {MAX_BALL_RADIUS}")));
        }
        let mut sizes = vec![1u64];
        let mut sphere = vec![NormalForm::identity()];
        let mut total = 1usize;
        for _ in 0..radius {
            sphere = self.next_sphere(&sphere);
            total += sphere.len();
            if total > cap {
                return Err(Error::Resource(format!("ball exceeds {cap} elements")));
            }
            sizes.push(sphere.len() as u64);
        }
        Ok(sizes)
    }

    /// Letters of `w` in the induced subgroup on `mask`, peeled from the front:
    /// returns `(prefix, rest)` with `w = prefix rest`, `prefix` in the
    /// subgroup and `rest` without first letters in `mask`.
    pub fn split_prefix_in(&self, w: &NormalForm, mask: u32) -> (NormalForm, NormalForm) {
        let mut prefix = Vec::new();
        let mut rest = w.0.clone();
        loop {
            let cand = {
                let nf = NormalForm(rest.clone());
                self.first_letters_mask(&nf) & mask
            };
            if cand == 0 {
                break;
            }
            let s = VertexId(cand.trailing_zeros() as u8);
            let p = self.front_position(&rest, s).expect("first letter has a front position");
            rest.remove(p);
            prefix.push(s);
        }
        (self.canonicalize(&prefix), self.canonicalize(&rest))
    }
}

/// The permutation relating two reduced words of the same element while
/// keeping equal letters in relative order: `b[k] = a[perm[k]]`. `None` when
/// the letter multisets differ.
pub fn shuffle_permutation(a: &[VertexId], b: &[VertexId]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; a.len()];
    let mut perm = Vec::with_capacity(b.len());
    for &x in b {
        let i = (0..a.len()).find(|&i| !used[i] && a[i] == x)?;
        used[i] = true;
        perm.push(i);
    }
    Some(perm)
}
