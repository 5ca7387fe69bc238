//! Vacuum state and the tail-norm profile `k ↦ ‖𝔼(x*x) P_k^⊥‖`.

use crate::error::Result;
use crate::fock::expectation::expectation_diag;
use crate::fock::operator::OperatorMatrix;
use crate::linalg::{dense_op_norm, C64};

/// `ω_Γ(x) = ⟨x Ω, Ω⟩`.
pub fn vacuum_eval(x: &OperatorMatrix) -> C64 {
    x.vacuum_eval()
}

/// Operator norm of each diagonal block `p_w y p_w`, indexed like `words()`.
pub fn block_norms(y: &OperatorMatrix) -> Vec<f64> {
    let f = y.space();
    (0..f.words().len())
        .map(|wp| {
            let r: Vec<usize> = f.block(wp).collect();
            if r.is_empty() {
                0.0
            } else {
                dense_op_norm(&y.matrix().submatrix(&r, &r))
            }
        })
        .collect()
}

/// For `k = 0..N-1`, the norm of `𝔼(x*x)` restricted to word lengths in
/// `(k, N]`. Since `𝔼(x*x)` is block diagonal this is a maximum of block norms.
pub fn tail_profile(x: &OperatorMatrix) -> Result<Vec<f64>> {
    let y = expectation_diag(&x.adjoint().mul(x)?);
    let f = y.space();
    let norms = block_norms(&y);
    let n = f.depth();
    Ok((0..n)
        .map(|k| {
            f.words()
                .iter()
                .zip(&norms)
                .filter(|(w, _)| w.len() > k)
                .map(|(_, &v)| v)
                .fold(0.0, f64::max)
        })
        .collect())
}
