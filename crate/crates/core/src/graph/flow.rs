use super::{CycleCounts, UndirectedGraph};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use std::collections::{BTreeMap, VecDeque};

/// Non-backtracking digraph on the directed edges of an undirected graph:
/// `(e, f)` is an arc iff `terminus(e) = source(f)` and `f != conj(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

pub fn flow_graph(g: &UndirectedGraph) -> FlowGraph {
    let out = g.out_edges();
    let mut arcs = Vec::new();
    for e in 0..g.edge_count() {
        for &f in &out[g.terminus(e)] {
            if f != g.conj(e) {
                arcs.push((e, f));
            }
        }
    }
    FlowGraph::from_arcs(g.edge_count(), arcs)
}

impl FlowGraph {
    fn from_arcs(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut succ = vec![Vec::new(); vertex_count];
        let mut pred = vec![Vec::new(); vertex_count];
        for &(a, b) in &arcs {
            succ[a].push(b);
            pred[b].push(a);
        }
        Self { vertex_count, arcs, succ, pred }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, e: usize) -> &[usize] {
        &self.succ[e]
    }

    pub fn predecessors(&self, e: usize) -> &[usize] {
        &self.pred[e]
    }

    pub fn out_degree(&self, e: usize) -> usize {
        self.succ[e].len()
    }

    pub fn in_degree(&self, e: usize) -> usize {
        self.pred[e].len()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.succ[from].contains(&to)
    }

    fn reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            let next = if forward { &self.succ[v] } else { &self.pred[v] };
            for &w in next {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Every vertex reaches every other. A single vertex counts only when it
    /// carries a loop arc; the empty graph is not strongly connected.
    pub fn is_strongly_connected(&self) -> bool {
        match self.vertex_count {
            0 => false,
            1 => self.has_arc(0, 0),
            _ => self.reach(0, true).iter().all(|&s| s) && self.reach(0, false).iter().all(|&s| s),
        }
    }

    /// Number of weakly connected components of the flow graph (its
    /// undirected shadow).
    pub fn shadow_component_count(&self) -> usize {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in self.succ[v].iter().chain(&self.pred[v]) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        count
    }

    fn bfs_levels(&self) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.vertex_count];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[v] {
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// Gcd of all directed cycle lengths, computed from BFS levels as the gcd
    /// of `level(u) + 1 - level(v)` over all arcs `u -> v`.
    pub fn imprimitivity_index(&self) -> Result<usize> {
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let level = self.bfs_levels();
        let h = self.arcs.iter().fold(0usize, |acc, &(u, v)| {
            let diff = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs() as usize;
            gcd(acc, diff)
        });
        Ok(h)
    }

    /// Splits the vertices into `h` classes such that every arc runs from
    /// class `i + 1` to class `i` (and from the first class to the last).
    /// Vertex 0 always lands in the first class.
    pub fn cyclic_partition(&self, h: usize) -> Result<CyclicPartition> {
        let period = self.imprimitivity_index()?;
        if h == 0 || period % h != 0 {
            return Err(Error::InvalidIndex { index: h, period });
        }
        let level = self.bfs_levels();
        let class_of: Vec<usize> = level.iter().map(|&l| (h - l % h) % h).collect();
        let mut classes = vec![Vec::new(); h];
        for (v, &c) in class_of.iter().enumerate() {
            classes[c].push(v);
        }
        Ok(CyclicPartition { classes, class_of })
    }

    /// Rotation classes of closed walks, by length, found by depth-first
    /// enumeration in the flow graph. Exponential in `max_len`; intended as an
    /// oracle on small graphs.
    pub fn cycle_lengths(&self, max_len: usize) -> CycleCounts {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        let mut path = Vec::with_capacity(max_len);
        for start in 0..self.vertex_count {
            path.clear();
            path.push(start);
            self.extend_walk(start, max_len, &mut path, &mut counts);
        }
        CycleCounts::from_map(counts.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect())
    }

    fn extend_walk(&self, start: usize, max_len: usize, path: &mut Vec<usize>, counts: &mut BTreeMap<usize, u64>) {
        let last = *path.last().unwrap();
        for &next in &self.succ[last] {
            if next < start {
                continue;
            }
            if next == start && is_minimal_rotation(path) {
                *counts.entry(path.len()).or_default() += 1;
            }
            if path.len() < max_len {
                path.push(next);
                self.extend_walk(start, max_len, path, counts);
                path.pop();
            }
        }
    }
}

fn is_minimal_rotation(seq: &[usize]) -> bool {
    let n = seq.len();
    (1..n).all(|r| {
        for i in 0..n {
            let a = seq[i];
            let b = seq[(i + r) % n];
            if a != b {
                return a < b;
            }
        }
        true
    })
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Cyclic classes `E_1, ..., E_h` of a strongly connected flow graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl CyclicPartition {
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    /// Class `i` (0-based, so `class(0)` is `E_1`).
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class_of[e]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}
