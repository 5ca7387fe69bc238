//! JSON problem configuration.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "graph": { "vertices": ["a", "b", "c"], "edges": [["a", "b"]] },
//!   "vertices": {
//!     "a": { "hecke": { "q": 2.0 } },
//!     "b": { "blocks": [2] },
//!     "c": { "blocks": [1, 1], "density": [[[[0.3, 0]]], [[[0.7, 0]]]] }
//!   },
//!   "depth": 4,
//!   "seed": 7
//! }
//! ```
//!
//! Matrices are nested arrays of `[re, im]` pairs; an element of `⊕ M_{d_i}`
//! is a list with one matrix per block. A missing density means the
//! normalized trace.

use crate::analysis::{AnalysisOptions, Problem, SuiteOptions, VertexData};
use crate::coxeter::{CoxeterGroup, NormalForm, DEFAULT_BALL_CAP};
use crate::error::{Error, Result};
use crate::graph::SimplicialGraph;
use crate::linalg::{DenseMatrix, C64};
use crate::vertex::{AlgebraElement, FiniteDimAlgebra, StateSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub graph: GraphSpec,
    pub vertices: BTreeMap<String, VertexSpec>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub suite: SuiteSpec,
    #[serde(default)]
    pub topofree: TopofreeSpec,
}

fn default_depth() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hecke: Option<HeckeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<MatrixSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<MatrixSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeckeSpec {
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub fock_dim: usize,
    pub ball: usize,
    pub expression_len: usize,
    pub check_seconds: f64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            fock_dim: crate::fock::space::DEFAULT_DIM_CAP,
            ball: DEFAULT_BALL_CAP,
            expression_len: 12,
            check_seconds: 60.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identities: f64,
    pub expectation: f64,
    pub classify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identities: 1e-9, expectation: 1e-10, classify: crate::growth::DEFAULT_CLASSIFY_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteSpec {
    pub draws: usize,
    pub expressions: usize,
    pub max_expression_len: usize,
    pub term_samples: usize,
    /// Corrupts one rewrite rule, for testing that the suite notices.
    pub fault: bool,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        let d = SuiteOptions::default();
        SuiteSpec {
            draws: d.draws,
            expressions: d.expressions,
            max_expression_len: d.max_expression_len,
            term_samples: d.term_samples,
            fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TopofreeSpec {
    /// Letters of `w`; empty means the identity.
    pub w: Vec<String>,
    /// Elements of `S`, each a list of letters; empty means all generators.
    pub s: Vec<Vec<String>>,
    pub max_power: usize,
    pub radius: usize,
}

impl Default for TopofreeSpec {
    fn default() -> Self {
        TopofreeSpec { w: vec![], s: vec![], max_power: 4, radius: 4 }
    }
}

/// Line (1-based) of the first occurrence of `needle` in `text`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.find(needle).map(|i| text[..i].matches('\n').count() + 1)
}

fn anchored(text: &str, key: &str, msg: String) -> Error {
    let l = line_of(text, &format!("\"{key}\":")).or_else(|| line_of(text, &format!("\"{key}\"")));
    match l {
        Some(l) => Error::Config(format!("line {l}: {msg}")),
        None => Error::Config(msg),
    }
}

fn matrix(spec: &MatrixSpec, d: usize) -> std::result::Result<DenseMatrix, String> {
    if spec.len() != d || spec.iter().any(|r| r.len() != d) {
        return Err(format!("expected a {d}x{d} matrix"));
    }
    Ok(DenseMatrix::from_fn(d, d, |r, c| C64::new(spec[r][c][0], spec[r][c][1])))
}

fn element(spec: &[MatrixSpec], alg: &FiniteDimAlgebra) -> std::result::Result<Vec<DenseMatrix>, String> {
    if spec.len() != alg.blocks().len() {
        return Err(format!("{} matrices for {} blocks", spec.len(), alg.blocks().len()));
    }
    spec.iter().zip(alg.blocks()).map(|(m, &d)| matrix(m, d)).collect()
}

pub fn matrix_spec(m: &DenseMatrix) -> MatrixSpec {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ProblemConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(anchored(
                text,
                "schema_version",
                format!("unsupported schema_version {}, expected {SCHEMA_VERSION}", cfg.schema_version),
            ));
        }
        cfg.build_with_source(text)?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<Problem> {
        self.build_with_source("")
    }

    fn build_with_source(&self, text: &str) -> Result<Problem> {
        let names: Vec<&str> = self.graph.vertices.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> = self.graph.edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let graph = SimplicialGraph::from_names(&names, &edges).map_err(|e| anchored(text, "graph", e.to_string()))?;
        for k in self.vertices.keys() {
            if !self.graph.vertices.contains(k) {
                return Err(anchored(text, k, format!("algebra given for unknown vertex {k:?}")));
            }
        }
        let mut vs = Vec::with_capacity(names.len());
        for name in &names {
            let spec = self
                .vertices
                .get(*name)
                .ok_or_else(|| anchored(text, "vertices", format!("vertex {name:?} has no algebra")))?;
            vs.push(vertex_data(spec).map_err(|m| anchored(text, name, format!("vertex {name:?}: {m}")))?);
        }
        Problem::new(graph, vs)
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            depth: self.depth,
            seed: self.seed,
            classify_tol: self.tolerance.classify,
            fock_cap: self.caps.fock_dim,
            probe_pairs: 100,
        }
    }

    pub fn suite_options(&self) -> SuiteOptions {
        SuiteOptions {
            depth: self.depth,
            seed: self.seed,
            draws: self.suite.draws,
            tolerance: self.tolerance.identities,
            expectation_tolerance: self.tolerance.expectation,
            expressions: self.suite.expressions,
            max_expression_len: self.suite.max_expression_len.min(self.caps.expression_len),
            term_samples: self.suite.term_samples,
            fock_cap: self.caps.fock_dim,
            fault: self.suite.fault,
            ..SuiteOptions::default()
        }
    }

    /// `w` and `S` for the topological freeness search.
    pub fn topofree_words(&self, group: &CoxeterGroup) -> Result<(NormalForm, Vec<NormalForm>)> {
        let g = group.graph();
        let word = |ls: &[String]| -> Result<NormalForm> {
            let vs = ls.iter().map(|l| g.vertex_by_label(l)).collect::<Result<Vec<_>>>()?;
            Ok(group.reduce_unchecked(&vs))
        };
        let w = word(&self.topofree.w).map_err(|e| Error::Config(format!("topofree.w: {e}")))?;
        let s = if self.topofree.s.is_empty() {
            g.vertices().map(|v| group.generator(v)).collect()
        } else {
            self.topofree
                .s
                .iter()
                .map(|x| word(x))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Config(format!("topofree.s: {e}")))?
        };
        Ok((w, s))
    }
}

fn vertex_data(spec: &VertexSpec) -> std::result::Result<VertexData, String> {
    if let Some(h) = &spec.hecke {
        if spec.blocks.is_some() || spec.density.is_some() || spec.witness.is_some() {
            return Err("a Hecke vertex takes no blocks, density or witness".into());
        }
        return VertexData::hecke(h.q).map_err(|e| e.to_string());
    }
    let blocks = spec.blocks.clone().ok_or("either hecke or blocks is required")?;
    let alg = FiniteDimAlgebra::new(blocks).map_err(|e| e.to_string())?;
    let state = match &spec.density {
        Some(d) => StateSpec::new(&alg, element(d, &alg)?).map_err(|e| e.to_string())?,
        None => StateSpec::uniform_trace(&alg),
    };
    if !state.is_faithful() {
        return Err("density is not faithful".into());
    }
    let witness = match &spec.witness {
        Some(w) => Some(AlgebraElement { blocks: element(w, &alg)? }),
        None => None,
    };
    VertexData::new(alg, state, witness).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "schema_version": 1,
  "graph": { "vertices": ["a", "b", "c"], "edges": [["a", "b"]] },
  "vertices": {
    "a": { "hecke": { "q": 2.0 } },
    "b": { "blocks": [2], "witness": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]] },
    "c": { "blocks": [1, 1], "density": [[[[0.3, 0]]], [[[0.7, 0]]]] }
  },
  "depth": 3,
  "seed": 11
}"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ProblemConfig::parse(SAMPLE).unwrap();
        let p = cfg.build().unwrap();
        assert_eq!(p.graph.len(), 3);
        assert!(p.vertices[0].hecke_q.is_some());
        assert!(p.vertices[1].witness_is_central_unitary());
        let again = ProblemConfig::parse(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = SAMPLE.replace("\"edges\": [[\"a\", \"b\"]]", "\"edges\": [[\"a\", \"z\"]]");
        let e = ProblemConfig::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
        let bad = SAMPLE.replace("[[[[0.3, 0]]], [[[0.7, 0]]]]", "[[[[0.3, 0]]], [[[0.6, 0]]]]");
        let e = ProblemConfig::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("line 7"), "{e}");
        let e = ProblemConfig::parse("{ \"schema_version\": 1,\n \"graph\": 3 }").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }
}
