//! Verdict records shared by the structure reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictResult {
    Established,
    HypothesesFail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub name: String,
    pub value: Value,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Evidence {
    pub fn new(name: impl Into<String>, value: impl Into<Value>, tolerance: Option<f64>, passed: bool) -> Self {
        Evidence { name: name.into(), value: value.into(), tolerance, passed }
    }

    pub fn fact(name: impl Into<String>, value: impl Into<Value>) -> Self {
        Self::new(name, value, None, true)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub statement: String,
    pub result: VerdictResult,
    /// What was established, or why nothing was.
    pub conclusion: String,
    pub evidence: Vec<Evidence>,
    pub citations: Vec<String>,
    pub seeds: Vec<u64>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(statement: &str) -> Self {
        Verdict {
            statement: statement.into(),
            result: VerdictResult::Inconclusive,
            conclusion: String::new(),
            evidence: Vec::new(),
            citations: Vec::new(),
            seeds: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Evidence) {
        self.evidence.push(e);
    }

    pub fn finish(mut self, result: VerdictResult, conclusion: impl Into<String>) -> Self {
        self.result = result;
        self.conclusion = conclusion.into();
        if self.result == VerdictResult::Established && self.evidence.iter().any(|e| !e.passed) {
            self.result = VerdictResult::Inconclusive;
            self.notes.push("downgraded: a recorded check failed".into());
        }
        if self.evidence.is_empty() {
            self.evidence.push(Evidence::fact("graph", "no checks were needed"));
        }
        self
    }

    /// Copies evidence from a sub-verdict under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: &Verdict) {
        for e in &other.evidence {
            let mut e = e.clone();
            e.name = format!("{prefix}.{}", e.name);
            self.evidence.push(e);
        }
        for c in &other.citations {
            if !self.citations.contains(c) {
                self.citations.push(c.clone());
            }
        }
        for n in &other.notes {
            self.notes.push(format!("{prefix}: {n}"));
        }
        self.seeds.extend(other.seeds.iter().copied());
    }
}

pub mod cite {
    pub const SIMPLICITY_IDEAL: &str = "simplicity criterion: simple iff the graph product meets the tail ideal trivially";
    pub const SIMPLICITY_FINITE_DIM: &str = "simplicity criterion for finite-dimensional vertex algebras with faithful states";
    pub const SIMPLICITY_UNITARY: &str = "simplicity criterion with centralizing unitaries in the kernel of each state";
    pub const C_STAR_IRREDUCIBLE: &str = "C*-irreducibility of the inclusion into the quotient by the tail ideal";
    pub const JOIN_TENSOR: &str = "graph product over a join is the tensor product of the factors";
    pub const TRACE_UNIQUE: &str = "unique trace: tracial vertex states with unitaries in their kernels";
    pub const TRACE_NONE: &str = "no tracial state: a non-tracial vertex state with unitaries in all kernels";
    pub const NUCLEAR_EXACT: &str = "the ambient algebra is nuclear (exact) iff all vertex algebras are";
    pub const GRAPH_PRODUCT_EXACT: &str = "graph products of exact C*-algebras are exact";
    pub const GRAPH_PRODUCT_NUCLEAR: &str = "graph product nuclearity when each vertex algebra contains the compacts";
    pub const FINITE_DIM_IDEAL: &str = "for finite-dimensional vertex algebras the tail ideal is the compacts";
}
