//! Finite-dimensional C*-algebras `⊕ M_{d_i}` with faithful states, their GNS
//! representations, and the witness data used by the simplicity and trace
//! criteria (centered elements, the constant `q`, unitaries in the kernel of
//! the state).

use crate::error::{Error, Result};
use crate::linalg::{dense_op_norm, hermitian_eigenvalues, null_space_dim, DenseMatrix, C64, ONE, ZERO};
use rand::Rng;

/// Tolerance for "the state vanishes" on witnesses.
pub const CENTERED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDimAlgebra {
    blocks: Vec<usize>,
}

/// One dense matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<DenseMatrix>,
}

/// Per-block density matrices; `ω(x) = Σ tr(ρ_i x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub densities: Vec<DenseMatrix>,
}

impl FiniteDimAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::InvalidInput(format!("block sizes must be positive, got {blocks:?}")));
        }
        Ok(FiniteDimAlgebra { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Vector-space dimension `Σ d_i²`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|&d| DenseMatrix::zeros(d, d)).collect() }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|&d| DenseMatrix::identity(d, d)).collect() }
    }

    pub fn matrix_unit(&self, b: usize, j: usize, k: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.blocks[b][(j, k)] = ONE;
        x
    }

    /// Matrix units, block by block, row-major.
    pub fn basis(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (b, &d) in self.blocks.iter().enumerate() {
            for j in 0..d {
                for k in 0..d {
                    out.push(self.matrix_unit(b, j, k));
                }
            }
        }
        out
    }

    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        let ok = x.blocks.len() == self.blocks.len()
            && x.blocks.iter().zip(&self.blocks).all(|(m, &d)| m.nrows() == d && m.ncols() == d);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("element does not conform to the block structure".into()))
        }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|&d| DenseMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)))
                .collect(),
        }
    }
}

impl AlgebraElement {
    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: C64) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a * b).collect() }
    }

    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement { blocks: self.blocks.iter().map(|a| a.adjoint()).collect() }
    }

    /// C*-norm: the largest block operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(dense_op_norm).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.blocks.iter().all(|u| {
            let d = u.nrows();
            (u * u.adjoint() - DenseMatrix::identity(d, d)).iter().all(|x| x.norm() <= tol)
        })
    }

    /// Commutative element with the given diagonal entries, one per 1x1 block.
    pub fn scalars(values: &[C64]) -> AlgebraElement {
        AlgebraElement { blocks: values.iter().map(|&v| DenseMatrix::from_element(1, 1, v)).collect() }
    }
}

impl StateSpec {
    pub fn new(alg: &FiniteDimAlgebra, densities: Vec<DenseMatrix>) -> Result<Self> {
        if densities.len() != alg.blocks.len() {
            return Err(Error::InvalidInput(format!(
                "{} densities for {} blocks",
                densities.len(),
                alg.blocks.len()
            )));
        }
        let mut total = 0.0;
        for (i, (rho, &d)) in densities.iter().zip(&alg.blocks).enumerate() {
            if rho.nrows() != d || rho.ncols() != d {
                return Err(Error::InvalidInput(format!("density {i} is not {d}x{d}")));
            }
            if (rho - rho.adjoint()).iter().any(|x| x.norm() > 1e-12) {
                return Err(Error::InvalidInput(format!("density {i} is not Hermitian")));
            }
            if hermitian_eigenvalues(rho)[0] < -1e-12 {
                return Err(Error::InvalidInput(format!("density {i} is not positive semidefinite")));
            }
            total += rho.trace().re;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("densities have total trace {total}, expected 1")));
        }
        Ok(StateSpec { densities })
    }

    /// Normalized trace weighted by block size: `ρ_i = I / Σ d_j`.
    pub fn uniform_trace(alg: &FiniteDimAlgebra) -> StateSpec {
        let n: usize = alg.blocks.iter().sum();
        StateSpec {
            densities: alg.blocks.iter().map(|&d| DenseMatrix::identity(d, d) * C64::new(1.0 / n as f64, 0.0)).collect(),
        }
    }

    /// State on `ℂ^m` with the given weights.
    pub fn weights(w: &[f64]) -> StateSpec {
        StateSpec { densities: w.iter().map(|&x| DenseMatrix::from_element(1, 1, C64::new(x, 0.0))).collect() }
    }

    pub fn eval(&self, x: &AlgebraElement) -> C64 {
        self.densities.iter().zip(&x.blocks).map(|(r, a)| (r * a).trace()).sum()
    }

    pub fn is_faithful(&self) -> bool {
        self.densities.iter().all(|r| hermitian_eigenvalues(r)[0] > 1e-12)
    }

    /// Tracial iff every block density is a multiple of the identity.
    pub fn is_tracial(&self, tol: f64) -> bool {
        self.densities.iter().all(|r| {
            let d = r.nrows();
            let c = r.trace() / C64::new(d as f64, 0.0);
            (r - DenseMatrix::identity(d, d) * c).iter().all(|x| x.norm() <= tol)
        })
    }

    /// Diagonal entries of all densities, block by block.
    pub fn diagonal_weights(&self) -> Vec<f64> {
        self.densities.iter().flat_map(|r| (0..r.nrows()).map(move |i| r[(i, i)].re)).collect()
    }
}

/// `x - ω(x) 1`.
pub fn centered(alg: &FiniteDimAlgebra, st: &StateSpec, x: &AlgebraElement) -> AlgebraElement {
    x.add(&alg.one().scale(-st.eval(x)))
}

#[derive(Debug, Clone)]
enum RepKind {
    /// Hilbert–Schmidt picture: `a ↦ a L` with `ρ = L L*` blockwise, followed by
    /// an orthonormal basis whose first vector is the image of `1`.
    HilbertSchmidt { basis: DenseMatrix },
    /// Two-dimensional Hecke algebra in the basis `{ξ, Tξ}`.
    Hecke { p: f64, lplus: f64, lminus: f64 },
}

/// GNS representation; the cyclic vector is basis vector 0.
#[derive(Debug, Clone)]
pub struct GnsRep {
    algebra: FiniteDimAlgebra,
    state: StateSpec,
    dim: usize,
    kind: RepKind,
}

pub const CYCLIC_INDEX: usize = 0;

impl GnsRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self) -> &FiniteDimAlgebra {
        &self.algebra
    }

    pub fn state(&self) -> &StateSpec {
        &self.state
    }

    /// Matrix of left multiplication by `x` in the orthonormal GNS basis.
    pub fn left_mult(&self, x: &AlgebraElement) -> DenseMatrix {
        match &self.kind {
            RepKind::Hecke { p, lplus, lminus } => {
                let xp = x.blocks[0][(0, 0)];
                let xm = x.blocks[1][(0, 0)];
                let beta = (xp - xm) / (lplus - lminus);
                let alpha = xp - beta * *lplus;
                let mut m = DenseMatrix::zeros(2, 2);
                m[(0, 0)] = alpha;
                m[(1, 1)] = alpha + beta * *p;
                m[(0, 1)] = beta;
                m[(1, 0)] = beta;
                m
            }
            RepKind::HilbertSchmidt { basis, .. } => {
                let mut images = DenseMatrix::zeros(self.dim, self.dim);
                for j in 0..self.dim {
                    let col = basis.column(j).into_owned();
                    let y = self.hs_left_apply(x, col.as_slice());
                    for i in 0..self.dim {
                        images[(i, j)] = y[i];
                    }
                }
                basis.adjoint() * images
            }
        }
    }

    /// Coordinates of `x ξ` in the GNS basis.
    pub fn vector(&self, x: &AlgebraElement) -> Vec<C64> {
        self.left_mult(x).column(CYCLIC_INDEX).iter().copied().collect()
    }

    fn hs_left_apply(&self, x: &AlgebraElement, v: &[C64]) -> Vec<C64> {
        let mut out = Vec::with_capacity(v.len());
        let mut off = 0;
        for (b, &d) in self.algebra.blocks.iter().enumerate() {
            let m = DenseMatrix::from_row_slice(d, d, &v[off..off + d * d]);
            let y = &x.blocks[b] * m;
            for r in 0..d {
                for c in 0..d {
                    out.push(y[(r, c)]);
                }
            }
            off += d * d;
        }
        out
    }

    pub fn omega(&self, x: &AlgebraElement) -> C64 {
        self.state.eval(x)
    }

    pub fn is_hecke(&self) -> bool {
        matches!(self.kind, RepKind::Hecke { .. })
    }
}

/// GNS representation of a faithful state.
pub fn gns(alg: &FiniteDimAlgebra, st: &StateSpec) -> Result<GnsRep> {
    if st.densities.len() != alg.blocks.len() {
        return Err(Error::InvalidInput("state does not match the algebra".into()));
    }
    let mut chol = Vec::with_capacity(alg.blocks.len());
    for (i, rho) in st.densities.iter().enumerate() {
        if hermitian_eigenvalues(rho)[0] < -1e-12 {
            return Err(Error::InvalidInput(format!("density {i} is not positive semidefinite")));
        }
        let c = rho
            .clone()
            .cholesky()
            .filter(|c| (0..rho.nrows()).all(|k| c.l()[(k, k)].re > 1e-9))
            .ok_or_else(|| Error::InvalidInput(format!("state is not faithful: density {i} is singular")))?;
        chol.push(c.l());
    }
    let dim = alg.dim();
    // image of 1 in Hilbert–Schmidt coordinates
    let mut xi = Vec::with_capacity(dim);
    for l in &chol {
        for r in 0..l.nrows() {
            for c in 0..l.ncols() {
                xi.push(l[(r, c)]);
            }
        }
    }
    // Gram–Schmidt of [ξ, e_0, e_1, ...], done twice per vector for stability
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let push = |v: Vec<C64>, cols: &mut Vec<Vec<C64>>| {
        let mut w = v;
        for _ in 0..2 {
            for q in cols.iter() {
                let c: C64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let n = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(w.into_iter().map(|x| x / n).collect());
        }
    };
    push(xi, &mut cols);
    for k in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        push(e, &mut cols);
    }
    let basis = DenseMatrix::from_fn(dim, dim, |r, c| cols[c][r]);
    Ok(GnsRep {
        algebra: alg.clone(),
        state: st.clone(),
        dim,
        kind: RepKind::HilbertSchmidt { basis },
    })
}

/// Largest `q` with `a a* >= q ω(a* a) 1`.
pub fn optimal_q(alg: &FiniteDimAlgebra, st: &StateSpec, a: &AlgebraElement) -> Result<f64> {
    alg.check(a)?;
    let norm = a.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput("witness is zero".into()));
    }
    if st.eval(a).norm() > CENTERED_TOL * norm.max(1.0) {
        return Err(Error::InvalidInput("witness is not centered: ω(a) ≠ 0".into()));
    }
    let aa = a.mul(&a.adjoint());
    let lmin = aa
        .blocks
        .iter()
        .map(|b| hermitian_eigenvalues(b)[0])
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    let denom = st.eval(&a.adjoint().mul(a)).re;
    Ok(lmin / denom)
}

#[derive(Debug, Clone)]
pub struct UnitaryWitness {
    pub unitary: AlgebraElement,
    /// `ω(u x) = ω(x u)` for every `x`.
    pub central: bool,
}

/// Maximum number of candidates examined per search family.
pub const UNITARY_SEARCH_CAP: usize = 4096;
pub const PHASES_PER_SLOT: usize = 16;

/// Searches signed permutations, then a diagonal phase grid, then diagonal
/// unitaries whose last two phases are solved in closed form. Prefers a
/// candidate for which the state is central.
pub fn centered_unitary_search(alg: &FiniteDimAlgebra, st: &StateSpec) -> Option<UnitaryWitness> {
    let tol = 1e-12;
    let mut first: Option<AlgebraElement> = None;
    let consider = |u: AlgebraElement, first: &mut Option<AlgebraElement>| -> Option<UnitaryWitness> {
        if st.eval(&u).norm() > tol {
            return None;
        }
        if is_central(st, &u) {
            return Some(UnitaryWitness { unitary: u, central: true });
        }
        if first.is_none() {
            *first = Some(u);
        }
        None
    };

    for u in signed_permutations(alg).into_iter().take(UNITARY_SEARCH_CAP) {
        if let Some(w) = consider(u, &mut first) {
            return Some(w);
        }
    }
    let weights = st.diagonal_weights();
    let slots = weights.len();
    let grid = |k: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / PHASES_PER_SLOT as f64);
    let total = PHASES_PER_SLOT.checked_pow(slots as u32).unwrap_or(usize::MAX).min(UNITARY_SEARCH_CAP);
    for idx in 0..total {
        let phases: Vec<C64> = mixed_radix(idx, slots, PHASES_PER_SLOT).into_iter().map(grid).collect();
        if let Some(w) = consider(diagonal_unitary(alg, &phases), &mut first) {
            return Some(w);
        }
    }
    if slots >= 2 {
        // close the polygon Σ w_k e^{iθ_k} = 0 with the two heaviest slots
        let mut order: Vec<usize> = (0..slots).collect();
        order.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap().then(a.cmp(&b)));
        let (sa, sb) = (order[0], order[1]);
        let others: Vec<usize> = order[2..].to_vec();
        let total = PHASES_PER_SLOT.checked_pow(others.len() as u32).unwrap_or(usize::MAX).min(UNITARY_SEARCH_CAP);
        for idx in 0..total {
            let digits = mixed_radix(idx, others.len(), PHASES_PER_SLOT);
            let mut phases = vec![ONE; slots];
            let mut r = ZERO;
            for (&s, &k) in others.iter().zip(&digits) {
                phases[s] = grid(k);
                r += phases[s] * weights[s];
            }
            if let Some((pa, pb)) = close_two(weights[sa], weights[sb], -r) {
                phases[sa] = pa;
                phases[sb] = pb;
                if let Some(w) = consider(diagonal_unitary(alg, &phases), &mut first) {
                    return Some(w);
                }
            }
        }
    }
    first.map(|u| UnitaryWitness { unitary: u, central: false })
}

/// Phases `e^{iα}, e^{iβ}` with `a e^{iα} + b e^{iβ} = target`, if any.
fn close_two(a: f64, b: f64, target: C64) -> Option<(C64, C64)> {
    let r = target.norm();
    if a <= 0.0 || b <= 0.0 || r > a + b + 1e-15 || r < (a - b).abs() - 1e-15 {
        return None;
    }
    let dir = if r > 0.0 { target / r } else { ONE };
    // law of cosines for the angle of the first side relative to the target
    let cos_a = if r > 0.0 { ((a * a + r * r - b * b) / (2.0 * a * r)).clamp(-1.0, 1.0) } else { 1.0 };
    let alpha = cos_a.acos();
    let pa = dir * C64::from_polar(1.0, alpha);
    let rest = target - pa * a;
    let pb = if rest.norm() > 0.0 { rest / rest.norm() } else { -pa };
    if (pa * a + pb * b - target).norm() > 1e-12 {
        return None;
    }
    Some((pa, pb))
}

fn mixed_radix(mut idx: usize, len: usize, radix: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for k in (0..len).rev() {
        d[k] = idx % radix;
        idx /= radix;
    }
    d
}

fn diagonal_unitary(alg: &FiniteDimAlgebra, phases: &[C64]) -> AlgebraElement {
    let mut off = 0;
    let blocks = alg
        .blocks
        .iter()
        .map(|&d| {
            let m = DenseMatrix::from_fn(d, d, |r, c| if r == c { phases[off + r] } else { ZERO });
            off += d;
            m
        })
        .collect();
    AlgebraElement { blocks }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn block_signed_permutations(d: usize) -> Vec<DenseMatrix> {
    let perms = if d <= 5 { permutations(d) } else { vec![(0..d).collect()] };
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..(1usize << d.min(12)) {
            let m = DenseMatrix::from_fn(d, d, |r, c| {
                if p[r] == c {
                    // the last row flips first
                    if signs >> (d - 1 - r) & 1 == 1 {
                        -ONE
                    } else {
                        ONE
                    }
                } else {
                    ZERO
                }
            });
            out.push(m);
        }
    }
    out
}

fn signed_permutations(alg: &FiniteDimAlgebra) -> Vec<AlgebraElement> {
    let per_block: Vec<Vec<DenseMatrix>> = alg.blocks.iter().map(|&d| block_signed_permutations(d)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_block.len()];
    loop {
        out.push(AlgebraElement { blocks: idx.iter().zip(&per_block).map(|(&i, c)| c[i].clone()).collect() });
        if out.len() >= UNITARY_SEARCH_CAP {
            return out;
        }
        let mut k = per_block.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_block[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `ω(u x) = ω(x u)` for all `x`, i.e. every density commutes with `u`.
pub fn is_central(st: &StateSpec, u: &AlgebraElement) -> bool {
    st.densities
        .iter()
        .zip(&u.blocks)
        .all(|(r, b)| (r * b - b * r).iter().all(|x| x.norm() <= 1e-12))
}

/// Whether the commutant of the represented algebra consists of scalars only.
pub fn commutant_is_trivial(rep: &GnsRep) -> bool {
    let n = rep.dim();
    let gens: Vec<DenseMatrix> = rep.algebra().basis().iter().map(|x| rep.left_mult(x)).collect();
    let mut sys = DenseMatrix::zeros(n * n * gens.len(), n * n);
    // row-major vec(X): unknown (i, j) ↦ i * n + j; equation (X L - L X)_{ij} = 0
    for (g, l) in gens.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = g * n * n + i * n + j;
                for k in 0..n {
                    sys[(row, i * n + k)] += l[(k, j)];
                    sys[(row, k * n + j)] -= l[(i, k)];
                }
            }
        }
    }
    null_space_dim(&sys, 1e-10) == 1
}

/// Parameter `p = q^{-1/2} (q - 1)` of the two-dimensional Hecke algebra.
pub fn hecke_p(q: f64) -> f64 {
    (q - 1.0) / q.sqrt()
}

/// The two-dimensional Hecke algebra `span{1, T}` with `T* = T`,
/// `T² = 1 + p T` and the trace `τ(T) = 0`, realized as `ℂ²`.
#[derive(Debug, Clone)]
pub struct HeckeVertex {
    pub q: f64,
    pub p: f64,
    pub algebra: FiniteDimAlgebra,
    pub state: StateSpec,
    /// `T`, with spectrum `{√q, -1/√q}`.
    pub generator: AlgebraElement,
}

pub fn hecke_vertex(q: f64) -> Result<HeckeVertex> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidInput(format!("Hecke parameter must be positive, got {q}")));
    }
    let lplus = q.sqrt();
    let lminus = -1.0 / q.sqrt();
    let algebra = FiniteDimAlgebra::new(vec![1, 1])?;
    let state = StateSpec::weights(&[1.0 / (1.0 + q), q / (1.0 + q)]);
    let generator = AlgebraElement::scalars(&[C64::new(lplus, 0.0), C64::new(lminus, 0.0)]);
    Ok(HeckeVertex { q, p: hecke_p(q), algebra, state, generator })
}

impl HeckeVertex {
    /// GNS representation in the basis `{ξ, Tξ}`, where `T` acts by
    /// `[[0, 1], [1, p]]` exactly.
    pub fn rep(&self) -> GnsRep {
        GnsRep {
            algebra: self.algebra.clone(),
            state: self.state.clone(),
            dim: 2,
            kind: RepKind::Hecke { p: self.p, lplus: self.q.sqrt(), lminus: -1.0 / self.q.sqrt() },
        }
    }
}
