//! Graph products of finite-dimensional C*-algebras made concrete: the
//! right-angled Coxeter group of a graph, truncated Fock-space models of the
//! reduced graph product and its boundary algebra, growth series, and
//! verdict reports for simplicity, trace uniqueness and nuclearity.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod coxeter;
pub mod error;
pub mod fock;
pub mod graph;
pub mod growth;
pub mod lattice;
pub mod linalg;
pub mod vertex;

pub use error::{Error, Result};
