//! Trapping-set cores and virtual-bit augmentation.
//!
//! A trapping-set subgraph with checks of degree at most 2 reduces to its
//! core once the degree-1 checks are dropped. To study the core inside an
//! ambient code, every core bit `l_i` gets a leaf `l'_i` joined through a new
//! degree-2 check. The augmented edge order is `[E_1, E, E_2]` where
//! `e_i: l'_i -> l_i` and `conj(e_i): l_i -> l'_i`; bits are `L` then `L'`.
//! With this order `K'` has zero rows on `E_1` and zero columns on `E_2`.
//!
//! The effective-input law: decoding the augmented graph with `(u, u')`
//! behaves like decoding the core with `u'_i * u_i^rho`.

use crate::decoder::{DecodeStatus, LogDecoder};
use crate::error::{Error, Result};
use crate::graph::{to_undirected, validate, BipartiteGraph, Generator, UndirectedGraph};
use crate::rng::{log_uniform_odds, stream_rng};
use crate::spectral::{
    build_structural, perron, phase_exponents, predict_log, predict_termination, verdict_from_exponents, Prediction, SpectralSummary,
    StructuralMatrices, TerminationPrediction, Verdict, DEFAULT_TOLERANCE,
};
use rayon::prelude::*;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreKind {
    Cycle,
    SpaApplicable,
    Other,
}

impl fmt::Display for CoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoreKind::Cycle => "cycle",
            CoreKind::SpaApplicable => "spa-applicable",
            CoreKind::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrappingSetInfo {
    pub a: usize,
    pub b: usize,
    /// `None` when some check has degree above 2.
    pub core: Option<UndirectedGraph>,
    pub core_kind: CoreKind,
    pub report: Vec<String>,
}

/// Computes `(a, b)`, strips odd-degree checks and classifies the core.
pub fn classify(sub: &BipartiteGraph) -> TrappingSetInfo {
    let a = sub.bit_count();
    let degrees: Vec<usize> = (0..sub.check_count()).map(|c| sub.check_degree(c)).collect();
    let b = degrees.iter().filter(|&&d| d % 2 == 1).count();
    let mut report = Vec::new();
    if let Some((check, d)) = degrees.iter().enumerate().find(|(_, &d)| d > 2) {
        report.push(format!("check {check} has degree {d} > 2"));
        return TrappingSetInfo { a, b, core: None, core_kind: CoreKind::Other, report };
    }
    let mut renumber = vec![usize::MAX; sub.check_count()];
    let mut kept = 0;
    for (c, &d) in degrees.iter().enumerate() {
        if d == 2 {
            renumber[c] = kept;
            kept += 1;
        }
    }
    let edges: Vec<(usize, usize)> =
        sub.edge_list().into_iter().filter(|&(_, c)| renumber[c] != usize::MAX).map(|(bit, c)| (bit, renumber[c])).collect();
    let stripped = BipartiteGraph::new(a, kept, &edges).expect("indices are in range");
    let core = to_undirected(&stripped).expect("all remaining checks have degree 2");
    let v = validate(&stripped);
    let core_kind = if v.spa_theory_applicable {
        CoreKind::SpaApplicable
    } else if v.connected && v.min_bit_degree == 2 && v.max_bit_degree == 2 {
        CoreKind::Cycle
    } else {
        report.extend(v.failures());
        CoreKind::Other
    };
    TrappingSetInfo { a, b, core: Some(core), core_kind, report }
}

/// Bipartite graph of `core` plus one degree-1 check at each listed bit.
pub fn with_pendant_checks(core: &UndirectedGraph, bits: &[usize]) -> Result<BipartiteGraph> {
    let base = crate::graph::to_bipartite(core);
    let mut edges = base.edge_list();
    for (i, &bit) in bits.iter().enumerate() {
        if bit >= core.vertex_count() {
            return Err(Error::VertexOutOfRange { index: bit, count: core.vertex_count() });
        }
        edges.push((bit, base.check_count() + i));
    }
    BipartiteGraph::new(base.bit_count(), base.check_count() + bits.len(), &edges)
}

/// Bits that meet a degree-1 check in the trapping-set fixtures: the
/// degree-2 core bits for the (5,3) cores, two opposite corners for the
/// (6,2) grid.
pub fn fixture_pendants(gen: &Generator) -> Option<Vec<usize>> {
    match gen {
        Generator::Ts53Girth8 | Generator::Fig5A => Some(vec![2, 3, 4]),
        Generator::Ts53Girth6 => Some(vec![0, 3, 4]),
        Generator::Ts62 => Some(vec![0, 5]),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGraph {
    pub base: BipartiteGraph,
    pub augmented: BipartiteGraph,
}

/// Attaches one leaf bit and one degree-2 check to every base bit.
pub fn augment(base: &BipartiteGraph) -> Result<AugmentedGraph> {
    let v = validate(base);
    if !v.spa_theory_applicable {
        return Err(Error::Validation(v.failures().join("; ")));
    }
    let n = base.bit_count();
    let m = base.check_count();
    let mut edges = Vec::with_capacity(base.edge_count() + 2 * n);
    edges.extend((0..n).map(|i| (n + i, m + i)));
    edges.extend(base.edge_list());
    edges.extend((0..n).map(|i| (i, m + i)));
    let augmented = BipartiteGraph::new(2 * n, m + n, &edges)?;
    Ok(AugmentedGraph { base: base.clone(), augmented })
}

impl AugmentedGraph {
    pub fn core_bits(&self) -> usize {
        self.base.bit_count()
    }

    pub fn virtual_bit(&self, i: usize) -> usize {
        self.base.bit_count() + i
    }

    /// Edge `e_i` (leaf to core).
    pub fn leaf_edge(&self, i: usize) -> usize {
        i
    }

    /// Augmented id of base edge `e`.
    pub fn base_edge(&self, e: usize) -> usize {
        self.base.bit_count() + e
    }

    /// Edge `conj(e_i)` (core to leaf).
    pub fn return_edge(&self, i: usize) -> usize {
        self.base.bit_count() + self.base.edge_count() + i
    }

    pub fn undirected(&self) -> UndirectedGraph {
        to_undirected(&self.augmented).expect("augmented checks have degree 2")
    }

    /// Drops every leaf, its check and both its edges.
    pub fn remove_augmentation(&self) -> BipartiteGraph {
        let n = self.base.bit_count();
        let edges: Vec<_> = (0..self.base.edge_count())
            .map(|e| {
                let ae = self.base_edge(e);
                (self.augmented.bit_of(ae), self.augmented.check_of(ae))
            })
            .collect();
        BipartiteGraph::new(n, self.base.check_count(), &edges).expect("base indices")
    }

    /// The augmented graph without leaf `i`, its check and its two edges,
    /// together with the old id of every surviving edge.
    pub fn without_leaf(&self, i: usize) -> (BipartiteGraph, Vec<usize>) {
        let g = &self.augmented;
        let (leaf_bit, leaf_check) = (self.virtual_bit(i), self.base.check_count() + i);
        let mut kept = Vec::new();
        let mut edges = Vec::new();
        for e in 0..g.edge_count() {
            if g.check_of(e) == leaf_check {
                continue;
            }
            let bit = g.bit_of(e);
            let check = g.check_of(e);
            edges.push((if bit > leaf_bit { bit - 1 } else { bit }, if check > leaf_check { check - 1 } else { check }));
            kept.push(e);
        }
        let reduced = BipartiteGraph::new(g.bit_count() - 1, g.check_count() - 1, &edges).expect("renumbered indices");
        (reduced, kept)
    }

    /// Log-odds for the augmented bits: `log u` then `log u'`.
    pub fn inputs(&self, log_u: &[f64], log_u_prime: &[f64]) -> Vec<f64> {
        log_u.iter().chain(log_u_prime).copied().collect()
    }
}

/// `u'_i * u_i^rho`, componentwise, on odds.
pub fn effective_input(u: &[f64], u_prime: &[f64], rho: f64) -> Vec<f64> {
    u.iter().zip(u_prime).map(|(a, b)| b * a.powf(rho)).collect()
}

/// `log u'_i + rho log u_i`.
pub fn effective_log_input(log_u: &[f64], log_u_prime: &[f64], rho: f64) -> Vec<f64> {
    log_u.iter().zip(log_u_prime).map(|(a, b)| b + rho * a).collect()
}

/// Phase exponents of the augmented graph in terms of the core's.
///
/// Leaf inputs reach the core one iteration after the core inputs, so the
/// edge messages are `S_t(log u) + S_{t-1}(log u')` with
/// `S_t = (I + K + ... + K^{t-1}) Lambda`. A lag of one iteration moves a
/// contribution back one phase and divides it by `rho`:
/// `log U~_r = log U_r(u) + log U_{r-1}(u') / rho`. For `h = 1` this is the
/// core exponent of `u' u^rho` divided by `rho`.
pub fn augmented_exponents(s: &SpectralSummary, log_u: &[f64], log_u_prime: &[f64]) -> Result<Vec<f64>> {
    let a = phase_exponents(s, log_u)?;
    let b = phase_exponents(s, log_u_prime)?;
    let h = s.h;
    Ok((0..h).map(|r| a[r] + b[(r + h - 1) % h] / s.rho).collect())
}

/// Stopping-rule prediction for the augmented graph. A leaf estimate
/// equals its core bit's estimate one iteration earlier, so a phase counts
/// only when it and the previous phase give the same word.
pub fn augmented_termination(s: &SpectralSummary, m: &StructuralMatrices, exponents: &[f64], tol: f64) -> Result<TerminationPrediction> {
    let core = predict_termination(s, m, exponents, tol)?;
    let h = s.h;
    let words = (0..h)
        .map(|r| {
            let (w, prev) = (core.phase_words[r], core.phase_words[(r + h - 1) % h]);
            if w == prev {
                w
            } else {
                None
            }
        })
        .collect();
    Ok(TerminationPrediction::from_words(words, core.margin, tol))
}

/// Does a decoder outcome agree with a termination prediction? When both
/// words occur at different phases, either is accepted.
pub fn termination_matches(status: &DecodeStatus, t: &TerminationPrediction) -> bool {
    match status {
        DecodeStatus::Converged(w) if t.verdict != Verdict::NonConvergent => {
            let word = if w.iter().all(|&b| b == 0) {
                0
            } else if w.iter().all(|&b| b == 1) {
                1
            } else {
                return false;
            };
            t.phase_words.contains(&Some(word))
        }
        DecodeStatus::MaxIterations => t.verdict == Verdict::NonConvergent,
        _ => false,
    }
}

/// Does a decoder outcome agree with a verdict?
pub fn outcome_matches(status: &DecodeStatus, verdict: Verdict) -> bool {
    match (status, verdict) {
        (DecodeStatus::Converged(w), Verdict::Zero) => w.iter().all(|&b| b == 0),
        (DecodeStatus::Converged(w), Verdict::One) => w.iter().all(|&b| b == 1),
        (DecodeStatus::MaxIterations, Verdict::NonConvergent) => true,
        _ => false,
    }
}

/// Short label for an outcome: `ZERO`, `ONE`, `MIXED`, `NONCONVERGENT` or
/// `ESCAPE`.
pub fn outcome_label(status: &DecodeStatus) -> &'static str {
    match status {
        DecodeStatus::Converged(w) if w.iter().all(|&b| b == 0) => "ZERO",
        DecodeStatus::Converged(w) if w.iter().all(|&b| b == 1) => "ONE",
        DecodeStatus::Converged(_) => "MIXED",
        DecodeStatus::MaxIterations => "NONCONVERGENT",
        DecodeStatus::NumericEscape => "ESCAPE",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapsetCheck {
    pub spa: DecodeStatus,
    pub iterations: usize,
    /// Core prediction on the effective input `u' u^rho`.
    pub prediction: Prediction,
    pub agree: bool,
    /// Sign test on [`augmented_exponents`].
    pub lagged: Prediction,
    pub agree_lagged: bool,
    /// Stopping-rule prediction from [`augmented_exponents`].
    pub termination: TerminationPrediction,
    pub agree_termination: bool,
}

/// Decodes the augmented graph and compares with the core prediction on the
/// effective input.
pub fn verify_trapset_theorem(
    base: &BipartiteGraph,
    log_u: &[f64],
    log_u_prime: &[f64],
    eps: f64,
    max_iter: usize,
) -> Result<TrapsetCheck> {
    let aug = augment(base)?;
    let m = build_structural(base)?;
    let summary = perron(&m)?;
    check_pair(&aug, &m, &summary, log_u, log_u_prime, eps, max_iter)
}

fn check_pair(
    aug: &AugmentedGraph,
    m: &StructuralMatrices,
    summary: &SpectralSummary,
    log_u: &[f64],
    log_u_prime: &[f64],
    eps: f64,
    max_iter: usize,
) -> Result<TrapsetCheck> {
    let n = aug.core_bits();
    if log_u.len() != n || log_u_prime.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} core and {n} virtual inputs")));
    }
    let out = LogDecoder::new(&aug.augmented).run(&aug.inputs(log_u, log_u_prime), eps, max_iter)?;
    let prediction = predict_log(summary, &effective_log_input(log_u, log_u_prime, summary.rho), DEFAULT_TOLERANCE)?;
    let agree = outcome_matches(&out.status, prediction.verdict);
    let exps = augmented_exponents(summary, log_u, log_u_prime)?;
    let termination = augmented_termination(summary, m, &exps, DEFAULT_TOLERANCE)?;
    let lagged = verdict_from_exponents(exps, DEFAULT_TOLERANCE);
    Ok(TrapsetCheck {
        agree_lagged: outcome_matches(&out.status, lagged.verdict),
        agree_termination: termination_matches(&out.status, &termination),
        spa: out.status,
        iterations: out.iterations,
        prediction,
        agree,
        lagged,
        termination,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapsetTrial {
    pub trial: usize,
    pub attempts: usize,
    pub margin: f64,
    pub predicted: Verdict,
    pub spa: DecodeStatus,
    pub iterations: usize,
    pub agree: bool,
    pub lagged: Verdict,
    pub agree_lagged: bool,
    pub termination: Verdict,
    pub agree_termination: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrapsetReport {
    pub trials: Vec<TrapsetTrial>,
}

impl TrapsetReport {
    fn rate(&self, f: impl Fn(&TrapsetTrial) -> bool) -> f64 {
        self.trials.iter().filter(|t| f(t)).count() as f64 / self.trials.len().max(1) as f64
    }

    /// Agreement with the core prediction on `u' u^rho`.
    pub fn agreement(&self) -> f64 {
        self.rate(|t| t.agree)
    }

    /// Agreement with the sign test on [`augmented_exponents`].
    pub fn lagged_agreement(&self) -> f64 {
        self.rate(|t| t.agree_lagged)
    }

    /// Agreement with the stopping-rule prediction.
    pub fn termination_agreement(&self) -> f64 {
        self.rate(|t| t.agree_termination)
    }

    /// `trial,margin,predicted,spa,iterations,agree,lagged,agree_lagged,termination,agree_termination`,
    /// numbers to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,margin,predicted,spa,iterations,agree,lagged,agree_lagged,termination,agree_termination\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                t.trial,
                crate::fmt_g(t.margin),
                t.predicted,
                outcome_label(&t.spa),
                t.iterations,
                u8::from(t.agree),
                t.lagged,
                u8::from(t.agree_lagged),
                t.termination,
                u8::from(t.agree_termination)
            ));
        }
        out
    }
}

/// Settings for a randomised agreement run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapsetConfig {
    pub trials: usize,
    pub seed: u64,
    /// Virtual bits that carry ambient messages; others get `u' = 1`.
    pub genuine: Vec<bool>,
    pub min_margin: f64,
    /// Odds are drawn log-uniformly from `[1/spread, spread]`.
    pub spread: f64,
    pub eps: f64,
    pub max_iter: usize,
}

impl TrapsetConfig {
    pub fn new(bits: usize, trials: usize, seed: u64) -> Self {
        Self { trials, seed, genuine: vec![true; bits], min_margin: 0.05, spread: 10.0, eps: 1e-8, max_iter: 500 }
    }
}

/// Genuine-bit mask with the `count` lowest-degree bits marked (ties by
/// index).
pub fn genuine_mask(base: &BipartiteGraph, count: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..base.bit_count()).collect();
    order.sort_by_key(|&l| (base.bit_degree(l), l));
    let mut mask = vec![false; base.bit_count()];
    for &l in order.iter().take(count) {
        mask[l] = true;
    }
    mask
}

const MAX_ATTEMPTS: usize = 10_000;

/// Random `(u, u')` pairs, rejection-filtered on the prediction margin, each
/// decoded on the augmented graph. Trial `k` uses its own random stream.
pub fn trapset_agreement(base: &BipartiteGraph, cfg: &TrapsetConfig) -> Result<TrapsetReport> {
    let n = base.bit_count();
    if cfg.genuine.len() != n {
        return Err(Error::InvalidInput(format!("genuine mask has {} entries for {n} bits", cfg.genuine.len())));
    }
    let aug = augment(base)?;
    let m = build_structural(base)?;
    let summary = perron(&m)?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(cfg.seed, 0x7472_6170, k as u64);
            for attempt in 1..=MAX_ATTEMPTS {
                let log_u = log_uniform_odds(&mut rng, n, cfg.spread);
                let mut log_up = log_uniform_odds(&mut rng, n, cfg.spread);
                for (v, &g) in log_up.iter_mut().zip(&cfg.genuine) {
                    if !g {
                        *v = 0.0;
                    }
                }
                let eff = effective_log_input(&log_u, &log_up, summary.rho);
                let p = predict_log(&summary, &eff, DEFAULT_TOLERANCE)?;
                if p.margin < cfg.min_margin {
                    continue;
                }
                let c = check_pair(&aug, &m, &summary, &log_u, &log_up, cfg.eps, cfg.max_iter)?;
                return Ok(TrapsetTrial {
                    trial: k,
                    attempts: attempt,
                    margin: p.margin,
                    predicted: p.verdict,
                    spa: c.spa,
                    iterations: c.iterations,
                    agree: c.agree,
                    lagged: c.lagged.verdict,
                    agree_lagged: c.agree_lagged,
                    termination: c.termination.verdict,
                    agree_termination: c.agree_termination,
                });
            }
            Err(Error::InvalidInput(format!("no input with margin >= {} in {MAX_ATTEMPTS} draws", cfg.min_margin)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TrapsetReport { trials })
}

/// Compares every message of the augmented graph with leaf `i` neutral
/// (`log u'_i = 0`) against the graph with that leaf removed, for
/// iterations `1..=t`. Returns the largest absolute difference.
pub fn leaf_neutrality_gap(aug: &AugmentedGraph, log_u: &[f64], log_u_prime: &[f64], i: usize, t: usize) -> Result<f64> {
    let mut inputs = aug.inputs(log_u, log_u_prime);
    inputs[aug.virtual_bit(i)] = 0.0;
    let (reduced, kept) = aug.without_leaf(i);
    let mut reduced_inputs = inputs.clone();
    reduced_inputs.remove(aug.virtual_bit(i));
    let full = LogDecoder::new(&aug.augmented).trajectory(&inputs, t)?;
    let part = LogDecoder::new(&reduced).trajectory(&reduced_inputs, t)?;
    let mut gap = 0.0f64;
    for (a, b) in full.iter().zip(&part) {
        for (new, &old) in kept.iter().enumerate() {
            gap = gap.max((a.x[old] - b.x[new]).abs()).max((a.y[old] - b.y[new]).abs());
        }
    }
    Ok(gap)
}
