//! Structural matrices and Perron-Frobenius data of the flow matrix.
//!
//! `K[e][f] = 1` iff `lambda(conj f) = lambda(e)` and `conj f != e`, so that
//! `A(t) = Lambda + K A(t-1)` tracks the exponents of `x_e`. With the cyclic
//! classes `E_1..E_h` of the flow graph, the nonzero blocks are
//! `K_i = K[E_i, E_{i+1}]` (indices mod `h`).
//!
//! Normalisation: `y*_j z_j = 1` for every block, `||z||_1 = |E|`, and the
//! global left vector is the concatenation of the `y*_j` divided by `h`, so
//! that `y* z = 1`. Hence `c = y* Lambda = (c_1 + ... + c_h) / h`.

mod predict;
mod spectrum;

pub use predict::{
    convergence_rate, phase_exponents, predict, predict_log, predict_termination, verdict_from_exponents, ConvergenceRate, Prediction,
    TerminationPrediction, Verdict, DEFAULT_TOLERANCE,
};
pub use spectrum::{full_spectrum, Spectrum, SPECTRUM_SIZE_LIMIT};

use crate::error::{Error, Result};
use crate::graph::{flow_graph, to_undirected, BipartiteGraph, CyclicPartition, FlowGraph, UndirectedGraph};
use nalgebra::DMatrix;

const POWER_BUDGET: usize = 100_000;
const POWER_TOL: f64 = 1e-14;

/// `Lambda`, `K` and `T` of a degree-2-check graph, stored sparsely.
#[derive(Debug, Clone)]
pub struct StructuralMatrices {
    graph: UndirectedGraph,
    flow: FlowGraph,
    bits: usize,
    edge_bit: Vec<usize>,
    conj: Vec<usize>,
    k_rows: Vec<Vec<usize>>,
    k_cols: Vec<Vec<usize>>,
}

pub fn build_structural(b: &BipartiteGraph) -> Result<StructuralMatrices> {
    let graph = to_undirected(b)?;
    Ok(StructuralMatrices::from_undirected(&graph))
}

impl StructuralMatrices {
    pub fn from_undirected(g: &UndirectedGraph) -> Self {
        let n = g.edge_count();
        let out = g.out_edges();
        let mut k_rows = vec![Vec::new(); n];
        let mut k_cols = vec![Vec::new(); n];
        for e in 0..n {
            // columns f with conj(f) leaving the same vertex as e, conj(f) != e
            for &g_edge in &out[g.source(e)] {
                if g_edge != e {
                    let f = g.conj(g_edge);
                    k_rows[e].push(f);
                    k_cols[f].push(e);
                }
            }
        }
        for row in &mut k_rows {
            row.sort_unstable();
        }
        for col in &mut k_cols {
            col.sort_unstable();
        }
        Self {
            graph: g.clone(),
            flow: flow_graph(g),
            bits: g.vertex_count(),
            edge_bit: (0..n).map(|e| g.source(e)).collect(),
            conj: (0..n).map(|e| g.conj(e)).collect(),
            k_rows,
            k_cols,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_bit.len()
    }

    pub fn bit_count(&self) -> usize {
        self.bits
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn flow(&self) -> &FlowGraph {
        &self.flow
    }

    pub fn bit_of(&self, e: usize) -> usize {
        self.edge_bit[e]
    }

    pub fn conj(&self, e: usize) -> usize {
        self.conj[e]
    }

    /// Column indices of the ones in row `e` of `K`.
    pub fn k_row(&self, e: usize) -> &[usize] {
        &self.k_rows[e]
    }

    pub fn k_row_sums(&self) -> Vec<usize> {
        self.k_rows.iter().map(Vec::len).collect()
    }

    pub fn lambda(&self) -> DMatrix<i64> {
        DMatrix::from_fn(self.edge_count(), self.bits, |e, l| i64::from(self.edge_bit[e] == l))
    }

    pub fn k(&self) -> DMatrix<i64> {
        let mut k = DMatrix::zeros(self.edge_count(), self.edge_count());
        for (e, row) in self.k_rows.iter().enumerate() {
            for &f in row {
                k[(e, f)] = 1;
            }
        }
        k
    }

    pub fn t(&self) -> DMatrix<i64> {
        DMatrix::from_fn(self.edge_count(), self.edge_count(), |e, f| i64::from(self.conj[e] == f))
    }

    pub fn k_f64(&self) -> DMatrix<f64> {
        self.k().map(|v| v as f64)
    }

    /// `K v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.k_rows.iter().map(|row| row.iter().map(|&f| v[f]).sum()).collect()
    }

    /// `v^T K`.
    pub fn apply_left(&self, v: &[f64]) -> Vec<f64> {
        self.k_cols.iter().map(|col| col.iter().map(|&e| v[e]).sum()).collect()
    }

    /// `v^T Lambda`.
    pub fn project_bits(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.bits];
        for (e, &x) in v.iter().enumerate() {
            out[self.edge_bit[e]] += x;
        }
        out
    }
}

/// Left and right Perron vectors of one cyclic block, indexed by global edge.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPerron {
    pub edges: Vec<usize>,
    pub y_star: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub rho: f64,
    pub h: usize,
    pub partition: CyclicPartition,
    pub z: Vec<f64>,
    pub y_star: Vec<f64>,
    pub c: Vec<f64>,
    pub c_blocks: Vec<Vec<f64>>,
    pub blocks: Vec<BlockPerron>,
    pub right_residual: f64,
    pub left_residual: f64,
    pub power_iterations: usize,
}

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `||a - s b||_inf`.
fn residual(a: &[f64], s: f64, b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - s * y).abs()).fold(0.0, f64::max)
}

/// Power iteration for `op`, started from the positive vector `start`.
/// Returns the eigenvalue, the L1-normalised vector and the step count.
fn power_iterate(start: Vec<f64>, op: impl Fn(&[f64]) -> Vec<f64>) -> Result<(f64, Vec<f64>, usize)> {
    let mut v = start;
    let norm = l1(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    let mut best = f64::INFINITY;
    let mut stall = 0;
    for it in 1..=POWER_BUDGET {
        let w = op(&v);
        let lambda = l1(&w);
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::NotIrreducible);
        }
        let w: Vec<f64> = w.into_iter().map(|x| x / lambda).collect();
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let change = residual(&w, 1.0, &v) / vmax;
        v = w;
        if change <= POWER_TOL {
            return Ok((lambda, v, it));
        }
        // rounding floor: stop once the change has not improved for a while
        if change < best * 0.999 {
            best = change;
            stall = 0;
        } else {
            stall += 1;
            if stall > 200 && best < 1e-12 {
                return Ok((lambda, v, it));
            }
        }
    }
    Err(Error::NoConvergence { iterations: POWER_BUDGET })
}

/// Perron data using the cyclic partition of the flow graph.
pub fn perron(m: &StructuralMatrices) -> Result<SpectralSummary> {
    if !m.flow.is_strongly_connected() {
        return Err(Error::NotIrreducible);
    }
    let h = m.flow.imprimitivity_index()?;
    let partition = m.flow.cyclic_partition(h)?;
    perron_with_partition(m, &partition)
}

/// Perron data for a given cyclic partition, which must be the one of the
/// imprimitivity index (a coarser one leaves the block product imprimitive).
pub fn perron_with_partition(m: &StructuralMatrices, partition: &CyclicPartition) -> Result<SpectralSummary> {
    if !m.flow.is_strongly_connected() {
        return Err(Error::NotIrreducible);
    }
    let n = m.edge_count();
    let h = partition.h();
    let indicator = |v: &mut Vec<f64>| {
        for (e, x) in v.iter_mut().enumerate() {
            if partition.class_of(e) != 0 {
                *x = 0.0;
            }
        }
    };
    let power_h = |v: &[f64], left: bool| {
        let mut w = v.to_vec();
        for _ in 0..h {
            w = if left { m.apply_left(&w) } else { m.apply(&w) };
        }
        w
    };
    let mut start = vec![1.0; n];
    indicator(&mut start);
    let (mu, z1, it_r) = power_iterate(start.clone(), |v| power_h(v, false))?;
    let (_, y1, it_l) = power_iterate(start, |v| power_h(v, true))?;
    let rho = mu.powf(1.0 / h as f64);

    // z_j = rho^{j-h-1} K_j ... K_h z_1, i.e. z_{h-k} = rho^{-(k+1)} K^{k+1} z_1
    let mut z_parts = vec![Vec::new(); h];
    let mut y_parts = vec![Vec::new(); h];
    let mut w = z1.clone();
    z_parts[0] = z1;
    for k in 0..h.saturating_sub(1) {
        w = m.apply(&w).into_iter().map(|x| x / rho).collect();
        z_parts[h - 1 - k] = w.clone();
    }
    // y*_j = rho^{1-j} y*_1 K_1 ... K_{j-1}
    let mut w = y1.clone();
    y_parts[0] = y1;
    for part in y_parts.iter_mut().skip(1) {
        w = m.apply_left(&w).into_iter().map(|x| x / rho).collect();
        *part = w.clone();
    }

    let z_total: f64 = z_parts.iter().map(|p| l1(p)).sum();
    let z_scale = n as f64 / z_total;
    let pair = dot(&y_parts[0], &z_parts[0]) * z_scale;
    for p in &mut z_parts {
        p.iter_mut().for_each(|x| *x *= z_scale);
    }
    for p in &mut y_parts {
        p.iter_mut().for_each(|x| *x /= pair);
    }

    let mut z = vec![0.0; n];
    let mut y_star = vec![0.0; n];
    for e in 0..n {
        let j = partition.class_of(e);
        z[e] = z_parts[j][e];
        y_star[e] = y_parts[j][e] / h as f64;
    }
    let blocks: Vec<BlockPerron> = (0..h)
        .map(|j| {
            let edges = partition.class(j).to_vec();
            BlockPerron { y_star: edges.iter().map(|&e| y_parts[j][e]).collect(), z: edges.iter().map(|&e| z_parts[j][e]).collect(), edges }
        })
        .collect();
    let c = m.project_bits(&y_star);
    let c_blocks = block_influence(m, &blocks);
    let zmax = z.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let ymax = y_star.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let right_residual = residual(&m.apply(&z), rho, &z) / zmax;
    let left_residual = residual(&m.apply_left(&y_star), rho, &y_star) / ymax;
    Ok(SpectralSummary {
        rho,
        h,
        partition: partition.clone(),
        z,
        y_star,
        c,
        c_blocks,
        blocks,
        right_residual,
        left_residual,
        power_iterations: it_r.max(it_l),
    })
}

fn block_influence(m: &StructuralMatrices, blocks: &[BlockPerron]) -> Vec<Vec<f64>> {
    blocks
        .iter()
        .map(|blk| {
            let mut c = vec![0.0; m.bit_count()];
            for (&e, &y) in blk.edges.iter().zip(&blk.y_star) {
                c[m.bit_of(e)] += y;
            }
            c
        })
        .collect()
}

/// Influence vectors recomputed from the Perron data.
#[derive(Debug, Clone, PartialEq)]
pub struct Influence {
    /// `c = y* Lambda`.
    pub c: Vec<f64>,
    /// `c_i = y*_i Lambda_i`, one per cyclic class.
    pub c_blocks: Vec<Vec<f64>>,
    /// Scale convention in force.
    pub normalization: &'static str,
}

pub fn influence_vector(s: &SpectralSummary, m: &StructuralMatrices) -> Influence {
    Influence {
        c: m.project_bits(&s.y_star),
        c_blocks: block_influence(m, &s.blocks),
        normalization: "y*z = 1, y*_j z_j = 1, ||z||_1 = |E|",
    }
}

impl SpectralSummary {
    /// `c` scaled so that its largest entry is 1.
    pub fn c_normalized(&self) -> Vec<f64> {
        let max = self.c.iter().fold(0.0f64, |a, &x| a.max(x));
        self.c.iter().map(|x| x / max).collect()
    }

    /// Global `y*` with block `j` taken as `y*_j` (no `1/h` factor).
    pub fn block_left(&self, j: usize, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        for (&e, &y) in self.blocks[j].edges.iter().zip(&self.blocks[j].y_star) {
            v[e] = y;
        }
        v
    }

    /// Global vector supported on block `j` holding `z_j`.
    pub fn block_right(&self, j: usize, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        for (&e, &z) in self.blocks[j].edges.iter().zip(&self.blocks[j].z) {
            v[e] = z;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, generators::display_edge_order, to_bipartite, Generator};

    fn structural(gen: Generator) -> StructuralMatrices {
        build_structural(&to_bipartite(&generate(&gen).unwrap())).unwrap()
    }

    #[test]
    fn k_matches_transposed_flow_adjacency() {
        for gen in Generator::fixtures() {
            let m = structural(gen);
            let k = m.k();
            for e in 0..m.edge_count() {
                for f in 0..m.edge_count() {
                    assert_eq!(k[(e, f)] == 1, m.flow().has_arc(f, e), "{gen} {e} {f}");
                }
            }
        }
    }

    #[test]
    fn k4_row_sums() {
        assert!(structural(Generator::Complete(4)).k_row_sums().iter().all(|&s| s == 2));
    }

    #[test]
    fn structural_identity() {
        for gen in Generator::fixtures() {
            let m = structural(gen);
            let (l, t) = (m.lambda(), m.t());
            assert_eq!(&l * l.transpose() * &t - &t, m.k(), "{gen}");
            assert_eq!(&t * &t, DMatrix::identity(m.edge_count(), m.edge_count()));
        }
    }

    #[test]
    fn rejects_bad_checks() {
        let b = BipartiteGraph::new(3, 1, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(matches!(build_structural(&b), Err(Error::CheckDegree { .. })));
    }

    #[test]
    fn regular_perron() {
        for gen in [Generator::Complete(4), Generator::Petersen] {
            let s = perron(&structural(gen)).unwrap();
            assert!((s.rho - 2.0).abs() < 1e-9);
            assert!(s.z.iter().all(|&z| (z - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn example_5_2_perron() {
        let s = perron(&structural(Generator::Example52)).unwrap();
        let r = s.rho;
        assert!((r * r * r - r * r - 2.0).abs() < 1e-9);
        assert!((s.c[0] / s.c[2] - (r + 1.0) / (2.0 * (r * r - r))).abs() < 1e-9);
    }

    #[test]
    fn ts53_girth8_blocks() {
        let g = generate(&Generator::Ts53Girth8).unwrap();
        let g = g.permute_edges(&display_edge_order(&Generator::Ts53Girth8).unwrap()).unwrap();
        let m = StructuralMatrices::from_undirected(&g);
        let s = perron(&m).unwrap();
        assert_eq!(s.h, 4);
        assert!((s.rho - 2f64.sqrt()).abs() < 1e-9);
        assert!(s.right_residual < 1e-10 && s.left_residual < 1e-10);
        let yz: f64 = s.y_star.iter().zip(&s.z).map(|(a, b)| a * b).sum();
        assert!((yz - 1.0).abs() < 1e-12);
    }

    #[test]
    fn not_irreducible() {
        let m = structural(Generator::Fig3Tree);
        assert_eq!(perron(&m).unwrap_err(), Error::NotIrreducible);
    }
}
