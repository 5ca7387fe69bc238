//! Operators on a truncated Fock space with their guard levels.
//!
//! Every matrix stands for an operator `T` on the untruncated space. The guard
//! `g` records that the matrix agrees with `T` on all vectors supported in word
//! length `≤ g`. The grading interval `[lo, hi]` bounds how far `T` moves word
//! length, and `exact` records that the matrix is the full compression
//! `P_N T P_N`, which allows a sharper guard for adjoints.

use crate::error::{Error, Result};
use crate::fock::space::TruncatedFock;
use crate::linalg::{SparseMatrix, C64, ONE};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    space: Arc<TruncatedFock>,
    matrix: SparseMatrix,
    guard: i64,
    lo: i64,
    hi: i64,
    exact: bool,
}

impl OperatorMatrix {
    /// Wraps the compression of an operator whose length shift lies in
    /// `[lo, hi]`.
    pub fn compression(space: Arc<TruncatedFock>, matrix: SparseMatrix, lo: i64, hi: i64) -> Self {
        let n = space.depth() as i64;
        assert_eq!(matrix.nrows(), space.dim());
        assert_eq!(matrix.ncols(), space.dim());
        OperatorMatrix { space, matrix, guard: n - hi.max(0), lo, hi, exact: true }
    }

    pub fn identity(space: Arc<TruncatedFock>) -> Self {
        let m = SparseMatrix::identity(space.dim());
        Self::compression(space, m, 0, 0)
    }

    pub fn zero(space: Arc<TruncatedFock>) -> Self {
        let d = space.dim();
        Self::compression(space, SparseMatrix::zeros(d, d), 0, 0)
    }

    pub fn space(&self) -> &Arc<TruncatedFock> {
        &self.space
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Largest word length on which the matrix is exact. Negative when no
    /// vector is covered.
    pub fn guard(&self) -> i64 {
        self.guard
    }

    pub fn shift(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn check_host(&self, other: &OperatorMatrix) -> Result<()> {
        if self.space.same_host(&other.space) {
            Ok(())
        } else {
            Err(Error::InvalidInput("operators live on different Fock spaces".into()))
        }
    }

    /// `self ∘ other`.
    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_host(other)?;
        let guard = other.guard.min(self.guard - other.hi);
        let exact = self.exact && other.exact && ((self.lo, self.hi) == (0, 0) || (other.lo, other.hi) == (0, 0));
        let n = self.space.depth() as i64;
        let hi = self.hi + other.hi;
        Ok(OperatorMatrix {
            space: self.space.clone(),
            matrix: self.matrix.matmul(&other.matrix),
            guard: if exact { n - hi.max(0) } else { guard },
            lo: self.lo + other.lo,
            hi,
            exact,
        })
    }

    pub fn add_scaled(&self, c: C64, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_host(other)?;
        Ok(OperatorMatrix {
            space: self.space.clone(),
            matrix: self.matrix.add_scaled(c, &other.matrix),
            guard: self.guard.min(other.guard),
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
            exact: self.exact && other.exact,
        })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.add_scaled(ONE, other)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.add_scaled(-ONE, other)
    }

    pub fn scale(&self, c: C64) -> OperatorMatrix {
        OperatorMatrix { matrix: self.matrix.scale(c), ..self.clone() }
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        let n = self.space.depth() as i64;
        if self.exact {
            return OperatorMatrix {
                space: self.space.clone(),
                matrix: self.matrix.adjoint(),
                guard: n - (-self.lo).max(0),
                lo: -self.hi,
                hi: -self.lo,
                exact: true,
            };
        }
        // columns beyond the guard may hold truncation artifacts
        let keep = self.guarded_columns();
        OperatorMatrix {
            space: self.space.clone(),
            matrix: self.matrix.mask_columns(&keep).adjoint(),
            guard: (self.guard + self.lo).min(n),
            lo: -self.hi,
            hi: -self.lo,
            exact: false,
        }
    }

    /// Columns of length within the guard.
    pub fn guarded_columns(&self) -> Vec<bool> {
        columns_within(&self.space, self.guard)
    }

    /// Frobenius norm of the difference restricted to columns within both
    /// guards.
    pub fn guarded_deviation(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_host(other)?;
        let g = self.guard.min(other.guard);
        let keep = columns_within(&self.space, g);
        Ok(self.matrix.sub(&other.matrix).mask_columns(&keep).frobenius_norm())
    }

    /// The matrix with columns beyond `guard` removed.
    pub fn guarded_matrix(&self) -> SparseMatrix {
        self.matrix.mask_columns(&self.guarded_columns())
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.matvec(x)
    }

    /// `⟨x Ω, Ω⟩`.
    pub fn vacuum_eval(&self) -> C64 {
        self.matrix.get(0, 0)
    }

    pub fn norm(&self) -> f64 {
        self.matrix.op_norm()
    }

    /// Coordinate list `row col re im`, one entry per line.
    pub fn to_coo_text(&self) -> String {
        let mut s = format!("% {} {} {}\n", self.matrix.nrows(), self.matrix.ncols(), self.matrix.nnz());
        for (r, c, v) in self.matrix.triplets() {
            s.push_str(&format!("{r} {c} {:e} {:e}\n", v.re, v.im));
        }
        s
    }

    /// Replaces the entries keeping the bookkeeping; for maps that commute with
    /// the compression (block masks, diagonal conjugations).
    pub(crate) fn with_matrix(&self, matrix: SparseMatrix) -> OperatorMatrix {
        OperatorMatrix { matrix, ..self.clone() }
    }

    pub(crate) fn with_shift(mut self, lo: i64, hi: i64) -> OperatorMatrix {
        self.lo = lo;
        self.hi = hi;
        self
    }
}

fn columns_within(space: &TruncatedFock, g: i64) -> Vec<bool> {
    (0..space.dim()).map(|i| (space.length_of(i) as i64) <= g).collect()
}
