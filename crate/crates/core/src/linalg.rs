//! Complex sparse matrices (compressed rows) and the few dense helpers the
//! operator code needs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C64 = Complex64;
pub type DenseMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Matrices up to this size take the dense path for norms.
pub const DENSE_NORM_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![ONE; n])
    }

    pub fn diagonal(d: &[C64]) -> Self {
        let n = d.len();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for (i, &x) in d.iter().enumerate() {
            if x != ZERO {
                indices.push(i);
                data.push(x);
            }
            indptr.push(indices.len());
        }
        SparseMatrix { nrows: n, ncols: n, indptr, indices, data }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, C64)>) -> Self {
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut data: Vec<C64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut row_counts = vec![0usize; nrows];
        for (r, c, v) in t {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                data.push(v);
                row_counts[r] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] = indptr[r] + row_counts[r];
        }
        let mut m = SparseMatrix { nrows, ncols, indptr, indices, data };
        m.prune(0.0);
        m
    }

    pub fn from_dense(d: &DenseMatrix) -> Self {
        let mut t = Vec::new();
        for r in 0..d.nrows() {
            for c in 0..d.ncols() {
                let v = d[(r, c)];
                if v != ZERO {
                    t.push((r, c, v));
                }
            }
        }
        Self::from_triplets(d.nrows(), d.ncols(), t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Entries of row `r` as `(col, value)` pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b].iter().copied().zip(self.data[a..b].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        match self.indices[a..b].binary_search(&c) {
            Ok(k) => self.data[a + k],
            Err(_) => ZERO,
        }
    }

    /// Drops entries with modulus at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut data = Vec::with_capacity(self.data.len());
        indptr.push(0);
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.data[k].norm() > tol {
                    indices.push(self.indices[k]);
                    data.push(self.data[k]);
                }
            }
            indptr.push(indices.len());
        }
        self.indptr = indptr;
        self.indices = indices;
        self.data = data;
    }

    pub fn scale(&self, a: C64) -> Self {
        let mut m = self.clone();
        for x in &mut m.data {
            *x *= a;
        }
        if a == ZERO {
            m.prune(0.0);
        }
        m
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: C64, other: &SparseMatrix) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "shape mismatch in sum");
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut data = Vec::with_capacity(self.nnz() + other.nnz());
        indptr.push(0);
        for r in 0..self.nrows {
            let (mut i, ei) = (self.indptr[r], self.indptr[r + 1]);
            let (mut j, ej) = (other.indptr[r], other.indptr[r + 1]);
            while i < ei || j < ej {
                let ci = if i < ei { self.indices[i] } else { usize::MAX };
                let cj = if j < ej { other.indices[j] } else { usize::MAX };
                let (c, v) = if ci < cj {
                    i += 1;
                    (ci, self.data[i - 1])
                } else if cj < ci {
                    j += 1;
                    (cj, a * other.data[j - 1])
                } else {
                    i += 1;
                    j += 1;
                    (ci, self.data[i - 1] + a * other.data[j - 1])
                };
                if v != ZERO {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, data }
    }

    pub fn add(&self, other: &SparseMatrix) -> Self {
        self.add_scaled(ONE, other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Self {
        self.add_scaled(-ONE, other)
    }

    pub fn matmul(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let n = other.ncols;
        let mut acc = vec![ZERO; n];
        let mut mark = vec![usize::MAX; n];
        let mut cols: Vec<usize> = Vec::new();
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for r in 0..self.nrows {
            cols.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if mark[c] != r {
                        mark[c] = r;
                        acc[c] = ZERO;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                if acc[c] != ZERO {
                    indices.push(c);
                    data.push(acc[c]);
                }
            }
            indptr.push(indices.len());
        }
        SparseMatrix { nrows: self.nrows, ncols: n, indptr, indices, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let t = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        Self::from_triplets(self.ncols, self.nrows, t)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    /// `self^* x`.
    pub fn adjoint_matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![ZERO; self.ncols];
        for (r, c, v) in self.triplets() {
            y[c] += v.conj() * x[r];
        }
        y
    }

    /// Keeps the entries for which `f` returns a value, replacing them by it.
    pub fn filter_map(&self, mut f: impl FnMut(usize, usize, C64) -> Option<C64>) -> Self {
        let t = self.triplets().filter_map(|(r, c, v)| f(r, c, v).map(|w| (r, c, w))).collect();
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    /// Zeroes every column whose flag is false.
    pub fn mask_columns(&self, keep: &[bool]) -> Self {
        self.filter_map(|_, c, v| keep[c].then_some(v))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            d[(r, c)] = v;
        }
        d
    }

    /// Dense submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut pos = std::collections::HashMap::with_capacity(cols.len());
        for (j, &c) in cols.iter().enumerate() {
            pos.insert(c, j);
        }
        let mut d = DenseMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&j) = pos.get(&c) {
                    d[(i, j)] = v;
                }
            }
        }
        d
    }

    /// Largest singular value. Dense SVD for small matrices, otherwise power
    /// iteration on `A^* A` from a fixed pseudo-random start.
    /// The norm is the largest norm over the connected blocks of the nonzero
    /// pattern, so block-structured operators stay on the dense path.
    pub fn op_norm(&self) -> f64 {
        if self.nnz() == 0 {
            return 0.0;
        }
        if self.nrows.max(self.ncols) <= DENSE_NORM_LIMIT {
            return dense_op_norm(&self.to_dense());
        }
        let mut best = 0.0f64;
        for (rows, cols) in self.blocks() {
            let n = if rows.len().max(cols.len()) <= DENSE_NORM_LIMIT {
                dense_op_norm(&self.submatrix(&rows, &cols))
            } else {
                self.restrict(&rows, &cols).op_norm_iterative(1e-12, 20_000)
            };
            best = best.max(n);
        }
        best
    }

    /// Connected components of the bipartite row/column graph of the nonzero
    /// pattern, as sorted (rows, columns). Empty rows and columns are omitted.
    pub fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut uf = UnionFind::new(self.nrows + self.ncols);
        for (r, c, _) in self.triplets() {
            uf.union(r, self.nrows + c);
        }
        let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
        for r in 0..self.nrows {
            if self.indptr[r + 1] > self.indptr[r] {
                groups.entry(uf.find(r)).or_default().0.push(r);
            }
        }
        let mut used = vec![false; self.ncols];
        for &c in &self.indices {
            used[c] = true;
        }
        for (c, _) in used.iter().enumerate().filter(|(_, u)| **u) {
            groups.entry(uf.find(self.nrows + c)).or_default().1.push(c);
        }
        groups.into_values().collect()
    }

    /// Sparse restriction to the given rows and columns, renumbered.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let pos: std::collections::HashMap<usize, usize> = cols.iter().enumerate().map(|(j, &c)| (c, j)).collect();
        let mut t = Vec::new();
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&j) = pos.get(&c) {
                    t.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(rows.len(), cols.len(), t)
    }

    /// Smallest eigenvalue of the Hermitian part of the principal block on
    /// `idx`, computed block by block.
    pub fn min_hermitian_eigenvalue(&self, idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 0.0;
        }
        let sub = self.restrict(idx, idx);
        let mut uf = UnionFind::new(idx.len());
        for (r, c, _) in sub.triplets() {
            uf.union(r, c);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..idx.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut least = f64::INFINITY;
        for g in groups.values() {
            let ev = hermitian_eigenvalues(&sub.submatrix(g, g));
            least = least.min(ev[0]);
        }
        least
    }

    pub fn op_norm_iterative(&self, tol: f64, max_iter: usize) -> f64 {
        if self.nnz() == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f726d);
        let mut x: Vec<C64> = (0..self.ncols)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        normalize(&mut x);
        let mut est = 0.0;
        for _ in 0..max_iter {
            let y = self.matvec(&x);
            let mut z = self.adjoint_matvec(&y);
            let lam = vec_norm(&z);
            if lam == 0.0 {
                return est;
            }
            for v in &mut z {
                *v /= lam;
            }
            x = z;
            let new = lam.sqrt();
            if (new - est).abs() <= tol * new.max(1.0) {
                return new;
            }
            est = new;
        }
        est
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(x: &mut [C64]) {
    let n = vec_norm(x);
    if n > 0.0 {
        for v in x {
            *v /= n;
        }
    }
}

pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn dense_op_norm(d: &DenseMatrix) -> f64 {
    if d.is_empty() {
        return 0.0;
    }
    d.clone().svd(false, false).singular_values.max()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(d: &DenseMatrix) -> Vec<f64> {
    if d.is_empty() {
        return Vec::new();
    }
    let h = (d + d.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn dense_max_abs(d: &DenseMatrix) -> f64 {
    d.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Dimension of the null space of `m`, counting singular values below
/// `tol * max(1, largest singular value)`.
pub fn null_space_dim(m: &DenseMatrix, tol: f64) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    if m.nrows() == 0 {
        return m.ncols();
    }
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.max().max(1.0);
    let rank = sv.iter().filter(|&&s| s > tol * scale).count();
    m.ncols() - rank
}
