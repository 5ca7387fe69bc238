//! Truncated graph-product Hilbert space and the operators acting on it.

pub mod expectation;
pub mod operator;
pub mod ops;
pub mod profile;
pub mod rewrite;
pub mod space;
pub mod tensor;

pub use expectation::{expectation_diag, expectation_subgraph, gauge_average};
pub use operator::OperatorMatrix;
pub use ops::{
    annihilation, creation, creation_adjoint, diagonal, gauge_conjugate, gauge_unitary, lambda_op, p_lengths, p_word,
    q_projection, q_projection_lattice, rho_op,
};
pub use profile::{tail_profile, vacuum_eval};
pub use rewrite::{signature, ElementaryTerm, Generator, Rewriter};
pub use space::{build_fock, build_fock_capped, FockIndex, TruncatedFock};
pub use tensor::{tensor_split_check, TensorSplitReport};
