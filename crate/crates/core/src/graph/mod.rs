//! The three graph forms used throughout the crate.
//!
//! * [`UndirectedGraph`]: directed edges paired by a fixed-point-free
//!   involution (`conjugate`). A conventional drawn edge `{u, v}` is the pair
//!   `u -> v`, `v -> u`. Loops and parallel edges are allowed.
//! * [`BipartiteGraph`]: bit nodes, check nodes and edges carrying one end of
//!   each kind. Check degree is arbitrary here; the degree-2 property is a
//!   query, not a construction requirement.
//! * [`FlowGraph`]: the non-backtracking digraph on the edge set of an
//!   undirected graph.
//!
//! Edge ids are preserved by [`to_bipartite`] and [`to_undirected`], so every
//! matrix built later uses the same edge ordering as the graph it came from.

mod cycles;
mod flow;
pub mod generators;
pub mod io;

pub use cycles::{enumerate_admissible_cycles, CycleCounts};
pub use flow::{flow_graph, CyclicPartition, FlowGraph};
pub use generators::{generate, Generator};

use crate::error::{Error, Result};
use std::collections::VecDeque;

/// One directed edge of an [`UndirectedGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub source: usize,
    pub terminus: usize,
    pub conjugate: usize,
}

/// Undirected graph in the involution form `(E, V, source, terminus, conj)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertex_count: usize,
    source: Vec<usize>,
    terminus: Vec<usize>,
    conjugate: Vec<usize>,
}

impl UndirectedGraph {
    /// Builds a graph from explicit edge records, checking every invariant of
    /// the involution form.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let n = edges.len();
        let mut source = Vec::with_capacity(n);
        let mut terminus = Vec::with_capacity(n);
        let mut conjugate = Vec::with_capacity(n);
        for &(s, t, c) in edges {
            for v in [s, t] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange { index: v, count: vertex_count });
                }
            }
            source.push(s);
            terminus.push(t);
            conjugate.push(c);
        }
        for e in 0..n {
            let c = conjugate[e];
            if c >= n {
                return Err(Error::MalformedGraph(format!("edge {e} has conjugate {c} out of range")));
            }
            if c == e {
                return Err(Error::MalformedGraph(format!("edge {e} is its own conjugate")));
            }
            if conjugate[c] != e {
                return Err(Error::MalformedGraph(format!("conjugation is not an involution at edge {e}")));
            }
            if source[c] != terminus[e] || terminus[c] != source[e] {
                return Err(Error::MalformedGraph(format!("edge {e} and its conjugate {c} do not reverse each other")));
            }
        }
        Ok(Self { vertex_count, source, terminus, conjugate })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of directed edges, always even.
    pub fn edge_count(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn conj(&self, e: usize) -> usize {
        self.conjugate[e]
    }

    pub fn edge(&self, e: usize) -> Edge {
        Edge { id: e, source: self.source[e], terminus: self.terminus[e], conjugate: self.conjugate[e] }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_count()).map(move |e| self.edge(e))
    }

    /// Vertex degree counts outgoing directed edges, so a loop adds two.
    pub fn degree(&self, v: usize) -> usize {
        self.source.iter().filter(|&&s| s == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &s in &self.source {
            deg[s] += 1;
        }
        deg
    }

    /// Edges leaving each vertex, in edge-id order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count];
        for (e, &s) in self.source.iter().enumerate() {
            out[s].push(e);
        }
        out
    }

    /// One `(source, terminus)` pair per conjugate pair, taken from the lower
    /// edge id of the pair.
    pub fn conventional_edges(&self) -> Vec<(usize, usize)> {
        self.edges().filter(|e| e.id < e.conjugate).map(|e| (e.source, e.terminus)).collect()
    }

    /// Renumbers edges so that position `i` holds old edge `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> Result<Self> {
        let n = self.edge_count();
        let mut position = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::InvalidInput(format!("edge order has {} entries, graph has {n} edges", order.len())));
        }
        for (i, &old) in order.iter().enumerate() {
            if old >= n || position[old] != usize::MAX {
                return Err(Error::InvalidInput("edge order is not a permutation".into()));
            }
            position[old] = i;
        }
        let edges: Vec<_> = order.iter().map(|&old| (self.source[old], self.terminus[old], position[self.conjugate[old]])).collect();
        Self::from_edges(self.vertex_count, &edges)
    }

    /// Connectivity of the underlying multigraph. Isolated vertices count.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let out = self.out_edges();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &out[v] {
                let w = self.terminus[e];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Expands each vertex pair into a conjugate edge pair: pair `k` becomes edge
/// `2k: u -> v` and edge `2k + 1: v -> u`.
pub fn build_undirected(vertex_count: usize, pairs: &[(usize, usize)]) -> Result<UndirectedGraph> {
    let mut edges = Vec::with_capacity(2 * pairs.len());
    for (k, &(u, v)) in pairs.iter().enumerate() {
        edges.push((u, v, 2 * k + 1));
        edges.push((v, u, 2 * k));
    }
    UndirectedGraph::from_edges(vertex_count, &edges)
}

/// Bipartite graph with edges running from bit nodes to check nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    bits: usize,
    checks: usize,
    edge_bit: Vec<usize>,
    edge_check: Vec<usize>,
    bit_edges: Vec<Vec<usize>>,
    check_edges: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// `edges[i] = (bit, check)` for edge `i`.
    pub fn new(bits: usize, checks: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut bit_edges = vec![Vec::new(); bits];
        let mut check_edges = vec![Vec::new(); checks];
        for (e, &(b, c)) in edges.iter().enumerate() {
            if b >= bits {
                return Err(Error::VertexOutOfRange { index: b, count: bits });
            }
            if c >= checks {
                return Err(Error::VertexOutOfRange { index: c, count: checks });
            }
            bit_edges[b].push(e);
            check_edges[c].push(e);
        }
        Ok(Self {
            bits,
            checks,
            edge_bit: edges.iter().map(|&(b, _)| b).collect(),
            edge_check: edges.iter().map(|&(_, c)| c).collect(),
            bit_edges,
            check_edges,
        })
    }

    pub fn bit_count(&self) -> usize {
        self.bits
    }

    pub fn check_count(&self) -> usize {
        self.checks
    }

    pub fn edge_count(&self) -> usize {
        self.edge_bit.len()
    }

    pub fn bit_of(&self, e: usize) -> usize {
        self.edge_bit[e]
    }

    pub fn check_of(&self, e: usize) -> usize {
        self.edge_check[e]
    }

    pub fn edges_at_bit(&self, bit: usize) -> &[usize] {
        &self.bit_edges[bit]
    }

    pub fn edges_at_check(&self, check: usize) -> &[usize] {
        &self.check_edges[check]
    }

    pub fn bit_degree(&self, bit: usize) -> usize {
        self.bit_edges[bit].len()
    }

    pub fn check_degree(&self, check: usize) -> usize {
        self.check_edges[check].len()
    }

    /// `(bit, check)` for every edge, in edge order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edge_bit.iter().copied().zip(self.edge_check.iter().copied()).collect()
    }

    pub fn all_checks_degree2(&self) -> bool {
        self.check_edges.iter().all(|c| c.len() == 2)
    }

    /// First check whose degree differs from 2.
    pub fn first_bad_check(&self) -> Option<(usize, usize)> {
        self.check_edges.iter().enumerate().find(|(_, c)| c.len() != 2).map(|(i, c)| (i, c.len()))
    }

    /// Connectivity of the graph viewed as an undirected graph on bits and
    /// checks together.
    pub fn is_connected(&self) -> bool {
        let total = self.bits + self.checks;
        if total == 0 {
            return true;
        }
        let mut seen = vec![false; total];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(node) = queue.pop_front() {
            let neighbours: Box<dyn Iterator<Item = usize>> = if node < self.bits {
                Box::new(self.bit_edges[node].iter().map(|&e| self.bits + self.edge_check[e]))
            } else {
                Box::new(self.check_edges[node - self.bits].iter().map(|&e| self.edge_bit[e]))
            };
            for w in neighbours {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Puts a check node on every conjugate pair. Bits are the vertices, edge ids
/// are unchanged, and checks are numbered by the lower edge id of their pair.
pub fn to_bipartite(g: &UndirectedGraph) -> BipartiteGraph {
    let mut check_of = vec![usize::MAX; g.edge_count()];
    let mut checks = 0;
    for e in 0..g.edge_count() {
        if check_of[e] == usize::MAX {
            check_of[e] = checks;
            check_of[g.conj(e)] = checks;
            checks += 1;
        }
    }
    let edges: Vec<_> = (0..g.edge_count()).map(|e| (g.source(e), check_of[e])).collect();
    BipartiteGraph::new(g.vertex_count(), checks, &edges).expect("indices come from a valid graph")
}

/// The undirected graph associated to a bipartite graph whose checks all have
/// degree 2. The two edges at each check become a conjugate pair.
pub fn to_undirected(b: &BipartiteGraph) -> Result<UndirectedGraph> {
    if let Some((check, degree)) = b.first_bad_check() {
        return Err(Error::CheckDegree { check, degree });
    }
    let edges: Vec<_> = (0..b.edge_count())
        .map(|e| {
            let pair = b.edges_at_check(b.check_of(e));
            let conj = if pair[0] == e { pair[1] } else { pair[0] };
            (b.bit_of(e), b.bit_of(conj), conj)
        })
        .collect();
    UndirectedGraph::from_edges(b.bit_count(), &edges)
}

/// Standing hypotheses for the convergence theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub connected: bool,
    pub min_bit_degree: usize,
    pub max_bit_degree: usize,
    pub has_degree_ge3_bit: bool,
    pub all_checks_degree2: bool,
    pub spa_theory_applicable: bool,
}

impl ValidationReport {
    /// Human-readable reasons the hypotheses fail; empty when applicable.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("graph is not connected".to_string());
        }
        if !self.all_checks_degree2 {
            out.push("some check does not have degree 2".to_string());
        }
        if self.min_bit_degree < 2 {
            out.push(format!("a bit has degree {} < 2", self.min_bit_degree));
        }
        if !self.has_degree_ge3_bit {
            out.push("no bit of degree ≥ 3".to_string());
        }
        out
    }
}

pub fn validate(b: &BipartiteGraph) -> ValidationReport {
    let degrees: Vec<_> = (0..b.bit_count()).map(|l| b.bit_degree(l)).collect();
    let min_bit_degree = degrees.iter().copied().min().unwrap_or(0);
    let max_bit_degree = degrees.iter().copied().max().unwrap_or(0);
    let connected = b.is_connected();
    let all_checks_degree2 = b.all_checks_degree2();
    let has_degree_ge3_bit = max_bit_degree >= 3;
    ValidationReport {
        connected,
        min_bit_degree,
        max_bit_degree,
        has_degree_ge3_bit,
        all_checks_degree2,
        spa_theory_applicable: connected && all_checks_degree2 && min_bit_degree >= 2 && has_degree_ge3_bit,
    }
}
