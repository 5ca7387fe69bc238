//! Finite simplicial graphs and the combinatorics derived from them:
//! complements, links and stars, cliques, closed covering walks and
//! join decompositions.
//!
//! Vertices are numbered `0..n` in construction order; that order is the
//! tie-break for every lexicographic choice made elsewhere in the crate.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest vertex count accepted. Adjacency is stored as bit masks.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u8);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bit(self) -> u32 {
        1u32 << self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Undirected graph without loops or multiple edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialGraph {
    labels: Vec<String>,
    adj: Vec<u32>,
}

/// An induced subgraph together with the parent ids of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: SimplicialGraph,
    /// `embedding[i]` is the parent vertex of local vertex `i`.
    pub embedding: Vec<VertexId>,
}

/// A sequence of vertices with consecutive entries adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub steps: Vec<VertexId>,
}

impl SimplicialGraph {
    /// Builds a graph from vertex labels and an edge list of index pairs.
    pub fn new(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(Error::Resource(format!(
                "graph has {n} vertices, cap is {MAX_VERTICES}"
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidGraph(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut adj = vec![0u32; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has an endpoint outside the vertex set")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {:?}", labels[u])));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(SimplicialGraph { labels, adj })
    }

    /// Graph with vertices named by their labels and edges given as label pairs.
    pub fn from_names(names: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = names.iter().position(|x| x == a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let ib = names.iter().position(|x| x == b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            idx.push((ia, ib));
        }
        Self::new(labels, &idx)
    }

    pub fn edgeless(n: usize) -> Self {
        Self::new(default_labels(n), &[]).expect("valid edgeless graph")
    }

    pub fn complete(n: usize) -> Self {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Self::new(default_labels(n), &e).expect("valid complete graph")
    }

    /// Path v0 - v1 - ... - v(n-1).
    pub fn path(n: usize) -> Self {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(default_labels(n), &e).expect("valid path")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            e.push((n - 1, 0));
        }
        Self::new(default_labels(n), &e).expect("valid cycle")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).map(|i| VertexId(i as u8))
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, name: &str) -> Result<VertexId> {
        self.labels
            .iter()
            .position(|l| l == name)
            .map(|i| VertexId(i as u8))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.index() < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u.index()] & v.bit() != 0
    }

    /// Adjacent or equal: the generators commute in the Coxeter group.
    #[inline]
    pub fn commute(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.adjacent(u, v)
    }

    #[inline]
    pub fn neighbor_mask(&self, v: VertexId) -> u32 {
        self.adj[v.index()]
    }

    pub fn all_mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    /// Edges as ordered index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for v in self.vertices() {
                if u < v && self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> SimplicialGraph {
        let all = self.all_mask();
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(i, m)| !m & all & !(1u32 << i))
            .collect();
        SimplicialGraph { labels: self.labels.clone(), adj }
    }

    /// Induced subgraph on the given vertices (kept in ascending order).
    pub fn induced(&self, vs: &[VertexId]) -> Subgraph {
        let mut embedding: Vec<VertexId> = vs.to_vec();
        embedding.sort();
        embedding.dedup();
        let labels = embedding.iter().map(|v| self.labels[v.index()].clone()).collect();
        let adj = embedding
            .iter()
            .map(|&u| {
                let mut m = 0u32;
                for (j, &v) in embedding.iter().enumerate() {
                    if self.adjacent(u, v) {
                        m |= 1 << j;
                    }
                }
                m
            })
            .collect();
        Subgraph { graph: SimplicialGraph { labels, adj }, embedding }
    }

    pub fn induced_mask(&self, mask: u32) -> Subgraph {
        self.induced(&mask_to_vertices(mask))
    }

    pub fn link(&self, v: VertexId) -> Result<Subgraph> {
        self.check_vertex(v)?;
        Ok(self.induced_mask(self.adj[v.index()]))
    }

    pub fn star(&self, v: VertexId) -> Result<Subgraph> {
        self.check_vertex(v)?;
        Ok(self.induced_mask(self.adj[v.index()] | v.bit()))
    }

    pub fn is_clique_mask(&self, mask: u32) -> bool {
        mask_to_vertices(mask)
            .iter()
            .all(|&v| self.adj[v.index()] | v.bit() | !mask == u32::MAX)
    }

    /// All cliques (complete vertex subsets, including the empty one),
    /// ordered by size and then lexicographically.
    pub fn cliques(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = Vec::new();
        let mut current = Vec::new();
        self.extend_cliques(&mut current, self.all_mask(), &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn extend_cliques(&self, current: &mut Vec<VertexId>, candidates: u32, out: &mut Vec<Vec<VertexId>>) {
        out.push(current.clone());
        let mut rest = candidates;
        while rest != 0 {
            let i = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            let v = VertexId(i);
            current.push(v);
            // only larger vertices are added afterwards, so each clique appears once
            self.extend_cliques(current, rest & self.adj[v.index()], out);
            current.pop();
        }
    }

    pub fn clique_number(&self) -> usize {
        self.cliques().last().map_or(0, |c| c.len())
    }

    /// Connected components as bit masks, ordered by smallest vertex.
    pub fn components(&self) -> Vec<u32> {
        let mut seen = 0u32;
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen & v.bit() != 0 {
                continue;
            }
            let mut comp = v.bit();
            let mut frontier = v.bit();
            while frontier != 0 {
                let mut next = 0u32;
                for u in mask_to_vertices(frontier) {
                    next |= self.adj[u.index()];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as disconnected; a single vertex is connected.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    /// A closed walk through every vertex, starting at `start` (default: the
    /// first vertex). The walk follows a depth-first tour and stops as soon as
    /// every vertex has been seen and the current vertex is adjacent to the
    /// start. `None` when the graph is disconnected or empty.
    pub fn closed_covering_walk(&self, start: Option<VertexId>) -> Option<Walk> {
        if !self.is_connected() {
            return None;
        }
        let s = start.unwrap_or(VertexId(0));
        if s.index() >= self.len() {
            return None;
        }
        if self.len() == 1 {
            return Some(Walk { steps: vec![s] });
        }
        // Euler tour of the DFS tree, as a sequence of visited vertices.
        let mut tour = vec![s];
        let mut visited = s.bit();
        let mut stack = vec![s];
        while let Some(&top) = stack.last() {
            let fresh = self.adj[top.index()] & !visited;
            if fresh != 0 {
                let nxt = VertexId(fresh.trailing_zeros() as u8);
                visited |= nxt.bit();
                stack.push(nxt);
                tour.push(nxt);
            } else {
                stack.pop();
                if let Some(&back) = stack.last() {
                    tour.push(back);
                }
            }
        }
        let all = self.all_mask();
        let mut seen = 0u32;
        for (i, &v) in tour.iter().enumerate() {
            seen |= v.bit();
            if seen == all && i > 0 && self.adjacent(v, s) {
                return Some(Walk { steps: tour[..=i].to_vec() });
            }
        }
        None
    }

    /// Closed covering walk whose last step is `end`.
    pub fn closed_covering_walk_ending_at(&self, end: VertexId) -> Option<Walk> {
        let mut w = self.closed_covering_walk(Some(end))?;
        w.steps.reverse();
        Some(w)
    }

    /// Induced subgraphs on the components of the complement, ordered by size
    /// and then by vertex list.
    pub fn join_decomposition(&self) -> Vec<Subgraph> {
        let mut parts: Vec<Vec<VertexId>> = self
            .complement()
            .components()
            .into_iter()
            .map(mask_to_vertices)
            .collect();
        parts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        parts.iter().map(|p| self.induced(p)).collect()
    }

    /// Graph join: disjoint union with every cross pair joined by an edge.
    pub fn join(&self, other: &SimplicialGraph) -> Result<SimplicialGraph> {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut edges: Vec<(usize, usize)> =
            self.edges().iter().map(|(u, v)| (u.index(), v.index())).collect();
        edges.extend(other.edges().iter().map(|(u, v)| (u.index() + n, v.index() + n)));
        for i in 0..n {
            for j in 0..other.len() {
                edges.push((i, n + j));
            }
        }
        SimplicialGraph::new(labels, &edges)
    }
}

impl Walk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_walk_in(&self, g: &SimplicialGraph) -> bool {
        !self.steps.is_empty() && self.steps.windows(2).all(|p| g.adjacent(p[0], p[1]))
    }

    pub fn is_closed_in(&self, g: &SimplicialGraph) -> bool {
        match self.steps.len() {
            0 => false,
            1 => true,
            _ => g.adjacent(self.steps[0], *self.steps.last().unwrap()),
        }
    }

    pub fn covers(&self, g: &SimplicialGraph) -> bool {
        let m = self.steps.iter().fold(0u32, |m, v| m | v.bit());
        m == g.all_mask()
    }

    /// Cyclic rotation by `k` steps.
    pub fn rotated(&self, k: usize) -> Walk {
        let n = self.steps.len();
        Walk { steps: (0..n).map(|i| self.steps[(i + k) % n]).collect() }
    }
}

pub fn mask_to_vertices(mask: u32) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(VertexId(m.trailing_zeros() as u8));
        m &= m - 1;
    }
    out
}

pub fn vertices_to_mask(vs: &[VertexId]) -> u32 {
    vs.iter().fold(0, |m, v| m | v.bit())
}

/// Labels `a, b, c, ...` for small graphs, `v26, v27, ...` afterwards.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u8) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn complement_examples() {
        let k3 = SimplicialGraph::complete(3);
        assert_eq!(k3.complement(), SimplicialGraph::edgeless(3));
        assert_eq!(SimplicialGraph::edgeless(3).complement(), k3);
        let p = SimplicialGraph::path(3).complement();
        assert_eq!(p.edges(), vec![(v(0), v(2))]);
    }

    #[test]
    fn link_and_star() {
        let p = SimplicialGraph::path(3);
        let l = p.link(v(1)).unwrap();
        assert_eq!(l.embedding, vec![v(0), v(2)]);
        assert!(l.graph.edges().is_empty());
        let s = p.star(v(1)).unwrap();
        assert_eq!(s.graph, p);
        let e = SimplicialGraph::edgeless(3);
        assert!(e.link(v(0)).unwrap().graph.is_empty());
        assert!(matches!(e.link(v(7)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn clique_counts() {
        assert_eq!(SimplicialGraph::complete(3).cliques().len(), 8);
        assert_eq!(SimplicialGraph::edgeless(3).cliques().len(), 4);
        let c4 = SimplicialGraph::cycle(4).cliques();
        assert_eq!(c4.len(), 9);
        assert!(c4[0].is_empty());
        assert_eq!(c4[1], vec![v(0)]);
        assert_eq!(c4[5], vec![v(0), v(1)]);
    }

    #[test]
    fn walks() {
        assert_eq!(
            SimplicialGraph::complete(3).closed_covering_walk(None).unwrap().steps,
            vec![v(0), v(1), v(2)]
        );
        assert!(SimplicialGraph::edgeless(2).closed_covering_walk(None).is_none());
        assert_eq!(
            SimplicialGraph::path(3).closed_covering_walk(Some(v(0))).unwrap().steps,
            vec![v(0), v(1), v(2), v(1)]
        );
        assert_eq!(SimplicialGraph::edgeless(1).closed_covering_walk(None).unwrap().steps, vec![v(0)]);
    }

    #[test]
    fn join_decomposition_examples() {
        let k3 = SimplicialGraph::complete(3).join_decomposition();
        assert_eq!(k3.len(), 3);
        assert_eq!(SimplicialGraph::edgeless(3).join_decomposition().len(), 1);
        let p = SimplicialGraph::path(3).join_decomposition();
        assert_eq!(p[0].embedding, vec![v(1)]);
        assert_eq!(p[1].embedding, vec![v(0), v(2)]);
        assert!(p[1].graph.edges().is_empty());
    }

    #[test]
    fn graph_validation() {
        assert!(SimplicialGraph::new(default_labels(2), &[(0, 0)]).is_err());
        assert!(SimplicialGraph::new(default_labels(2), &[(0, 3)]).is_err());
        assert!(SimplicialGraph::new(vec!["a".into(), "a".into()], &[]).is_err());
        assert!(SimplicialGraph::new(default_labels(17), &[]).unwrap_err().is_resource());
    }
}
