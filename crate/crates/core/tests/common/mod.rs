//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use gplab::analysis::{Problem, VertexData};
use gplab::graph::{SimplicialGraph, VertexId};
use gplab::linalg::{DenseMatrix, C64};
use gplab::vertex::{AlgebraElement, FiniteDimAlgebra, StateSpec};
use std::collections::HashSet;

/// Integer Tits representation of a right-angled Coxeter group: the bilinear
/// form is 1 on the diagonal, 0 on edges and -1 on non-edges. It is faithful,
/// so matrices stand in for group elements without any word combinatorics.
pub struct Tits {
    pub n: usize,
    gens: Vec<Vec<i64>>,
}

impl Tits {
    pub fn new(g: &SimplicialGraph) -> Self {
        let n = g.len();
        let b = |s: usize, t: usize| -> i64 {
            if s == t {
                1
            } else if g.adjacent(VertexId(s as u8), VertexId(t as u8)) {
                0
            } else {
                -1
            }
        };
        let gens = (0..n)
            .map(|s| {
                let mut m = vec![0i64; n * n];
                for i in 0..n {
                    for t in 0..n {
                        let delta = (i == t) as i64;
                        let refl = if i == s { 2 * b(s, t) } else { 0 };
                        m[i * n + t] = delta - refl;
                    }
                }
                m
            })
            .collect();
        Tits { n, gens }
    }

    pub fn identity(&self) -> Vec<i64> {
        let mut m = vec![0; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.n;
        let mut c = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x != 0 {
                    for j in 0..n {
                        c[i * n + j] += x * b[k * n + j];
                    }
                }
            }
        }
        c
    }

    pub fn word(&self, w: &[VertexId]) -> Vec<i64> {
        w.iter().fold(self.identity(), |acc, s| self.mul(&acc, &self.gens[s.index()]))
    }

    /// Sphere sizes by breadth-first search on the Cayley graph.
    pub fn spheres(&self, depth: usize) -> Vec<u64> {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        let mut out = vec![1u64];
        for _ in 0..depth {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &self.gens {
                    let y = self.mul(m, g);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            out.push(next.len() as u64);
            frontier = next;
        }
        out
    }
}

pub fn m2() -> FiniteDimAlgebra {
    FiniteDimAlgebra::new(vec![2]).unwrap()
}

pub fn diag2(a: f64, b: f64) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(2, 2);
    m[(0, 0)] = C64::new(a, 0.0);
    m[(1, 1)] = C64::new(b, 0.0);
    m
}

/// `M_2` with the state of density `diag(w, 1 - w)`.
pub fn m2_weighted(w: f64) -> VertexData {
    let alg = m2();
    let st = StateSpec::new(&alg, vec![diag2(w, 1.0 - w)]).unwrap();
    VertexData::new(alg, st, None).unwrap()
}

pub fn m2_trace_with_witness() -> VertexData {
    VertexData::matrix_trace(2).unwrap().with_witness(AlgebraElement { blocks: vec![diag2(1.0, -1.0)] }).unwrap()
}

pub fn problem(g: SimplicialGraph, vs: Vec<VertexData>) -> Problem {
    Problem::new(g, vs).unwrap()
}

pub fn hecke_problem(g: SimplicialGraph, q: f64) -> Problem {
    let vs = (0..g.len()).map(|_| VertexData::hecke(q).unwrap()).collect();
    Problem::new(g, vs).unwrap()
}

/// Three graphs with Hecke, commutative and matrix vertices side by side.
pub fn mixed_problems() -> Vec<(&'static str, Problem)> {
    vec![
        (
            "path-3",
            problem(
                SimplicialGraph::path(3),
                vec![VertexData::hecke(1.0).unwrap(), VertexData::commutative(&[0.3, 0.7]).unwrap(), m2_weighted(0.6)],
            ),
        ),
        (
            "4-cycle",
            problem(
                SimplicialGraph::cycle(4),
                vec![
                    VertexData::hecke(2.0).unwrap(),
                    VertexData::matrix_trace(2).unwrap(),
                    VertexData::hecke(1.0).unwrap(),
                    VertexData::commutative(&[0.5, 0.5]).unwrap(),
                ],
            ),
        ),
        (
            "K3",
            problem(
                SimplicialGraph::complete(3),
                vec![VertexData::hecke(2.0).unwrap(), VertexData::commutative(&[0.2, 0.8]).unwrap(), m2_weighted(0.35)],
            ),
        ),
    ]
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}
