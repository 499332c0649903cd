//! Property suites with independent oracles, shared by the CLI `verify`
//! subcommand and the test suite.
//!
//! Every suite returns a [`SuiteReport`]: named pass/fail checks plus a CSV
//! body that is a deterministic function of the inputs and seed.

use crate::decoder::{local_sum_run, spa_log_run, DecodeStatus, LogDecoder};
use crate::error::{Error, Result};
use crate::fmt_g;
use crate::graph::{enumerate_admissible_cycles, flow_graph, generate, to_bipartite, validate, BipartiteGraph, Generator, UndirectedGraph};
use crate::rng::{log_uniform_odds, stream_rng};
use crate::spectral::{build_structural, perron, predict_log, predict_termination, StructuralMatrices, DEFAULT_TOLERANCE};
use crate::trapping::{
    augment, genuine_mask, leaf_neutrality_gap, outcome_label, outcome_matches, termination_matches, trapset_agreement, TrapsetConfig,
};
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::Zero;

/// Minimum agreement rate for the prediction and trapping-set suites.
pub const AGREEMENT_BAR: f64 = 0.99;
use rayon::prelude::*;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub csv: String,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), checks: Vec::new(), csv: String::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {}/{}: {}", if c.passed { "PASS" } else { "FAIL" }, self.suite, c.name, c.detail);
        }
        out
    }
}

/// Completely admissible cycle counts against depth-first enumeration of
/// closed walks in the flow graph. CSV: `length,admissible,flow_walks`.
pub fn verify_cycles(g: &UndirectedGraph, max_len: usize) -> Result<SuiteReport> {
    if max_len == 0 {
        return Err(Error::InvalidInput("maxlen must be positive".into()));
    }
    let mut r = SuiteReport::new("cycles");
    let dp = enumerate_admissible_cycles(g, max_len);
    let flow = flow_graph(g);
    let dfs = flow.cycle_lengths(max_len);
    r.csv.push_str("length,admissible,flow_walks\n");
    for len in 1..=max_len {
        let (a, b) = (dp.count(len), dfs.count(len));
        let _ = writeln!(r.csv, "{len},{a},{b}");
        if a != b {
            r.check(format!("length {len}"), false, format!("admissible {a} vs flow walks {b}"));
        }
    }
    if r.checks.is_empty() {
        r.check("counts", true, format!("lengths 1..={max_len} agree"));
    }
    if flow.is_strongly_connected() && !dp.is_empty() {
        let h = flow.imprimitivity_index()?;
        let gcd = dp.length_gcd().unwrap_or(0);
        r.check("index divides lengths", gcd.is_multiple_of(h), format!("h = {h}, gcd of lengths <= {max_len} = {gcd}"));
    }
    Ok(r)
}

/// `sum_{i<t} K^i Lambda` by repeated dense multiplication.
fn closed_form(m: &StructuralMatrices, t: usize) -> Vec<Vec<BigUint>> {
    let k = m.k();
    let lambda = m.lambda();
    let (n, bits) = (m.edge_count(), m.bit_count());
    let to_big = |d: &DMatrix<i64>| -> Vec<Vec<BigUint>> {
        (0..d.nrows()).map(|i| (0..d.ncols()).map(|j| BigUint::from(d[(i, j)] as u64)).collect()).collect()
    };
    let kb = to_big(&k);
    let mut power = to_big(&lambda);
    let mut sum = power.clone();
    for _ in 1..t {
        let mut next = vec![vec![BigUint::zero(); bits]; n];
        for e in 0..n {
            for f in 0..n {
                if !kb[e][f].is_zero() {
                    for l in 0..bits {
                        next[e][l] += &power[f][l];
                    }
                }
            }
        }
        power = next;
        for e in 0..n {
            for l in 0..bits {
                sum[e][l] += &power[e][l];
            }
        }
    }
    sum
}

/// Monomial law: log-domain messages equal `<a_e(t), log u>` from the
/// exponent recursion, and the recursion equals the closed form exactly.
pub fn verify_oracle(b: &BipartiteGraph, t_messages: usize, t_exact: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let m = build_structural(b)?;
    let mut r = SuiteReport::new("oracle");
    r.csv.push_str("sample,t,max_rel_error\n");
    let trajectories: Vec<_> = (0..samples)
        .map(|s| {
            let log_u = log_uniform_odds(&mut stream_rng(seed, 1, s as u64), b.bit_count(), 10.0);
            LogDecoder::new(b).trajectory(&log_u, t_messages).map(|tr| (log_u, tr))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for t in 1..=t_messages {
        let a = local_sum_run(b, t)?;
        for (s, (log_u, tr)) in trajectories.iter().enumerate() {
            let mut err = 0.0f64;
            for e in 0..b.edge_count() {
                let expect = a.log_message(e, log_u);
                let got = tr[t - 1].x[e];
                err = err.max((got - expect).abs() / expect.abs().max(1.0));
            }
            worst = worst.max(err);
            let _ = writeln!(r.csv, "{s},{t},{}", fmt_g(err));
        }
    }
    r.check("messages", worst <= 1e-9, format!("max relative error {} for t <= {t_messages}", fmt_g(worst)));
    let mut exact = true;
    for t in 1..=t_exact {
        if local_sum_run(b, t)?.rows() != closed_form(&m, t).as_slice() {
            r.check("closed form", false, format!("mismatch at t = {t}"));
            exact = false;
            break;
        }
    }
    if exact {
        r.check("closed form", true, format!("exact for t <= {t_exact}"));
    }
    Ok(r)
}

/// `K = Lambda Lambda^T T - T`, Perron residuals and the block relations.
pub fn verify_structural(b: &BipartiteGraph) -> Result<SuiteReport> {
    let m = build_structural(b)?;
    let mut r = SuiteReport::new("structural");
    let (lambda, t) = (m.lambda(), m.t());
    let identity = &lambda * lambda.transpose() * &t - &t;
    r.check("K = LL^T T - T", identity == m.k(), format!("{} edges", m.edge_count()));
    let s = perron(&m)?;
    r.csv =
        format!("rho,h,right_residual,left_residual\n{},{},{},{}\n", fmt_g(s.rho), s.h, fmt_g(s.right_residual), fmt_g(s.left_residual));
    r.check(
        "Perron residual",
        s.right_residual <= 1e-9 && s.left_residual <= 1e-9,
        format!("right {} left {}", fmt_g(s.right_residual), fmt_g(s.left_residual)),
    );
    // z^T T is a left eigenvector
    let n = m.edge_count();
    let zt: Vec<f64> = (0..n).map(|e| s.z[m.conj(e)]).collect();
    let lhs = m.apply_left(&zt);
    let scale = zt.iter().fold(0.0f64, |a, &x| a.max(x));
    let res = lhs.iter().zip(&zt).map(|(a, z)| (a - s.rho * z).abs()).fold(0.0f64, f64::max) / scale;
    r.check("z^T T left vector", res <= 1e-9 * s.rho, format!("residual {}", fmt_g(res)));
    let mut block_err = 0.0f64;
    for j in 0..s.h {
        let next = (j + 1) % s.h;
        let (yj, yn) = (s.block_left(j, n), s.block_left(next, n));
        let (zj, zn) = (s.block_right(j, n), s.block_right(next, n));
        // y*_j K_j = rho y*_{j+1}, K_j z_{j+1} = rho z_j
        let yk = m.apply_left(&yj);
        let kz = m.apply(&zn);
        let ys = yn.iter().fold(0.0f64, |a, &x| a.max(x));
        let zs = zj.iter().fold(0.0f64, |a, &x| a.max(x));
        for e in 0..n {
            block_err = block_err.max((yk[e] - s.rho * yn[e]).abs() / ys);
            block_err = block_err.max((kz[e] - s.rho * zj[e]).abs() / zs);
        }
    }
    r.check("block relations", block_err <= 1e-9, format!("h = {}, max relative residual {}", s.h, fmt_g(block_err)));
    Ok(r)
}

/// Prediction against the decoder on random inputs with margin at least
/// `min_margin`, both as the sign test on `log U_r` and as the stopping-rule
/// prediction. CSV:
/// `trial,margin,predicted,termination,spa,iterations,agree,agree_termination`.
pub fn verify_predict(b: &BipartiteGraph, trials: usize, seed: u64, min_margin: f64, max_iter: usize) -> Result<SuiteReport> {
    let m = build_structural(b)?;
    let s = perron(&m)?;
    let n = b.bit_count();
    let rows = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, 2, k as u64);
            loop {
                let log_u = log_uniform_odds(&mut rng, n, 10.0);
                let p = predict_log(&s, &log_u, DEFAULT_TOLERANCE)?;
                if p.margin < min_margin {
                    continue;
                }
                let t = predict_termination(&s, &m, &p.exponents, DEFAULT_TOLERANCE)?;
                let out = spa_log_run(b, &log_u, 1e-8, max_iter)?;
                let agree = outcome_matches(&out.status, p.verdict);
                let agree_t = termination_matches(&out.status, &t);
                return Ok(PredictRow {
                    margin: p.margin,
                    verdict: p.verdict,
                    termination: t.verdict,
                    status: out.status,
                    iterations: out.iterations,
                    agree,
                    agree_t,
                });
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r = SuiteReport::new("predict");
    r.csv.push_str("trial,margin,predicted,termination,spa,iterations,agree,agree_termination\n");
    for (k, x) in rows.iter().enumerate() {
        let _ = writeln!(
            r.csv,
            "{k},{},{},{},{},{},{},{}",
            fmt_g(x.margin),
            x.verdict,
            x.termination,
            outcome_label(&x.status),
            x.iterations,
            u8::from(x.agree),
            u8::from(x.agree_t)
        );
    }
    let count = |f: fn(&PredictRow) -> bool| rows.iter().filter(|x| f(x)).count();
    let (agree, agree_t) = (count(|x| x.agree), count(|x| x.agree_t));
    let total = trials.max(1) as f64;
    r.check(
        "phase exponents",
        agree as f64 / total >= AGREEMENT_BAR,
        format!("h = {}, {agree}/{trials} ({})", s.h, fmt_g(agree as f64 / total)),
    );
    r.check("stopping rule", agree_t as f64 / total >= AGREEMENT_BAR, format!("{agree_t}/{trials} ({})", fmt_g(agree_t as f64 / total)));
    Ok(r)
}

struct PredictRow {
    margin: f64,
    verdict: crate::spectral::Verdict,
    termination: crate::spectral::Verdict,
    status: DecodeStatus,
    iterations: usize,
    agree: bool,
    agree_t: bool,
}

/// Effective-input law on the augmented core, plus leaf neutrality for
/// `t <= 8`. CSV comes from the agreement run.
pub fn verify_trapset(core: &UndirectedGraph, genuine: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let base = to_bipartite(core);
    let n = base.bit_count();
    if genuine > n {
        return Err(Error::InvalidInput(format!("{genuine} genuine virtual bits requested for {n} core bits")));
    }
    let mut cfg = TrapsetConfig::new(n, trials, seed);
    cfg.genuine = genuine_mask(&base, genuine);
    let report = trapset_agreement(&base, &cfg)?;
    let mut r = SuiteReport::new("trapset");
    for (name, rate) in [
        ("effective input", report.agreement()),
        ("lagged exponents", report.lagged_agreement()),
        ("stopping rule", report.termination_agreement()),
    ] {
        let hits = (rate * trials as f64).round() as usize;
        r.check(name, rate >= AGREEMENT_BAR, format!("{hits}/{trials} ({})", fmt_g(rate)));
    }
    let aug = augment(&base)?;
    let mut rng = stream_rng(seed, 3, 0);
    let log_u = log_uniform_odds(&mut rng, n, 10.0);
    let log_up = log_uniform_odds(&mut rng, n, 10.0);
    let mut gap = 0.0f64;
    for i in 0..n {
        gap = gap.max(leaf_neutrality_gap(&aug, &log_u, &log_up, i, 8)?);
    }
    r.check("leaf neutrality", gap == 0.0, format!("max message difference {} for t <= 8", fmt_g(gap)));
    r.csv = report.to_csv();
    Ok(r)
}

/// Decoder outcomes on named fixtures whose answers are known.
pub fn verify_decoder() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("decoder");
    let ex = to_bipartite(&generate(&Generator::Example52)?);
    let out = crate::decoder::spa_run(&ex, &[0.5, 0.5, 4.5], 1e-8, 200)?;
    r.check("example_5_2", out.status == DecodeStatus::Converged(vec![0, 0, 0]), format!("{:?} after {}", out.status, out.iterations));
    let dip = to_bipartite(&generate(&Generator::Dipole(3))?);
    let out = crate::decoder::spa_run(&dip, &[2.0, 0.6], 1e-8, 500)?;
    r.check("dipole(3)", out.status == DecodeStatus::MaxIterations, format!("{:?}", out.status));
    r.csv = String::from("check,passed\n");
    for c in &r.checks.clone() {
        let _ = writeln!(r.csv, "{},{}", c.name, u8::from(c.passed));
    }
    Ok(r)
}

/// Hypotheses gate shared by suites that need them.
pub fn require_applicable(b: &BipartiteGraph) -> Result<()> {
    let v = validate(b);
    if v.spa_theory_applicable {
        Ok(())
    } else {
        Err(Error::Validation(v.failures().join("; ")))
    }
}
