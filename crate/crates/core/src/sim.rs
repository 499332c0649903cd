//! BPSK/AWGN Monte Carlo decoding.
//!
//! Bit 0 is sent as `+1`, bit 1 as `-1`; `y = s + N(0, sigma^2)` with
//! `sigma = sqrt(10^(-snr/10) / 2)` at unit symbol energy, and the decoder
//! input is `log u = -2 y / sigma^2`. The SNR is Es/N0 by default; with
//! [`SnrConvention::EbN0`] the per-symbol SNR is `snr + 10 log10(rate)`.
//!
//! Trial `k` at SNR point `j` draws its noise from the stream
//! `(seed, j, k)`, so the same noise is reused across the epsilon sweep and
//! results never depend on the thread count.

use crate::decoder::{DecodeStatus, LogDecoder};
use crate::error::{Error, Result};
use crate::fmt_g;
use crate::graph::{validate, BipartiteGraph};
use crate::rng::stream_rng;
use crate::spectral::{build_structural, perron, predict_log};
use crate::trapping::outcome_matches;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Deserialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnrConvention {
    EsN0,
    /// Energy per information bit for a code of the given rate.
    EbN0 {
        rate: f64,
    },
}

impl SnrConvention {
    /// Per-symbol SNR in dB.
    pub fn es_n0_db(&self, snr_db: f64) -> f64 {
        match *self {
            SnrConvention::EsN0 => snr_db,
            SnrConvention::EbN0 { rate } => snr_db + 10.0 * rate.log10(),
        }
    }
}

/// Rate `(n - rank H) / n` of a degree-2-check code; each connected
/// component contributes one information bit.
pub fn repetition_rate(b: &BipartiteGraph) -> f64 {
    let n = b.bit_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in 0..b.check_count() {
        let at = b.edges_at_check(c);
        for w in at.windows(2) {
            let (x, y) = (find(&mut parent, b.bit_of(w[0])), find(&mut parent, b.bit_of(w[1])));
            parent[x] = y;
        }
    }
    let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
    components as f64 / n as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub transmitted: Vec<u8>,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn all_zero(snr_db: f64, n: usize, seed: u64) -> Self {
        Self { snr_db, transmitted: vec![0; n], seed }
    }

    pub fn sigma(&self) -> f64 {
        sigma(self.snr_db)
    }
}

pub fn sigma(es_n0_db: f64) -> f64 {
    (10f64.powf(-es_n0_db / 10.0) / 2.0).sqrt()
}

/// Log-odds for a given noise realisation.
pub fn log_odds_from_noise(snr_db: f64, transmitted: &[u8], noise: &[f64]) -> Vec<f64> {
    let s = sigma(snr_db);
    transmitted
        .iter()
        .zip(noise)
        .map(|(&bit, &n)| {
            let symbol = if bit == 0 { 1.0 } else { -1.0 };
            -2.0 * (symbol + s * n) / (s * s)
        })
        .collect()
}

fn standard_noise(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// One channel realisation, reproducible from the seed.
pub fn awgn_odds(cfg: &ChannelConfig, n_bits: usize) -> Result<Vec<f64>> {
    if cfg.transmitted.len() != n_bits {
        return Err(Error::InvalidInput(format!("{} transmitted bits for {n_bits} positions", cfg.transmitted.len())));
    }
    let noise = standard_noise(&mut stream_rng(cfg.seed, 0, 0), n_bits);
    Ok(log_odds_from_noise(cfg.snr_db, &cfg.transmitted, &noise))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub graph: String,
    pub epsilon: f64,
    pub snr_db: f64,
    pub trials: u64,
    /// Converged to a word other than the one sent.
    pub word_errors: u64,
    /// Hit the iteration cap (numeric escapes are counted here too).
    pub nonconvergences: u64,
    pub total_iterations: u64,
}

impl SimRecord {
    pub fn correct(&self) -> u64 {
        self.trials - self.word_errors - self.nonconvergences
    }

    pub fn wer(&self) -> f64 {
        self.word_errors as f64 / self.trials as f64
    }

    pub fn ncr(&self) -> f64 {
        self.nonconvergences as f64 / self.trials as f64
    }

    /// Any decoding failure: wrong word or no convergence.
    pub fn failure_rate(&self) -> f64 {
        (self.word_errors + self.nonconvergences) as f64 / self.trials as f64
    }

    pub fn avg_iters(&self) -> f64 {
        self.total_iterations as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub epsilons: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub max_iter: usize,
    pub convention: SnrConvention,
    /// `None` runs on the global rayon pool.
    pub threads: Option<usize>,
}

impl SimConfig {
    pub fn new(epsilons: Vec<f64>, snr_db: Vec<f64>, trials: u64, seed: u64) -> Self {
        Self { epsilons, snr_db, trials, seed, max_iter: crate::decoder::DEFAULT_MAX_ITER, convention: SnrConvention::EsN0, threads: None }
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    errors: u64,
    nonconv: u64,
    iters: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally { errors: self.errors + o.errors, nonconv: self.nonconv + o.nonconv, iters: self.iters + o.iters }
    }
}

/// Runs every `(epsilon, snr)` cell with all-zero transmission.
pub fn run_trials(graph: &BipartiteGraph, name: &str, cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    let v = validate(graph);
    if !v.spa_theory_applicable {
        return Err(Error::Validation(v.failures().join("; ")));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    if let Some(e) = cfg.epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {e}")));
    }
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(|| run_cells(graph, name, cfg)),
        None => run_cells(graph, name, cfg),
    }
}

fn run_cells(graph: &BipartiteGraph, name: &str, cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    let decoder = LogDecoder::new(graph);
    let n = graph.bit_count();
    let zero = vec![0u8; n];
    let mut records = Vec::with_capacity(cfg.epsilons.len() * cfg.snr_db.len());
    for &eps in &cfg.epsilons {
        for (j, &snr) in cfg.snr_db.iter().enumerate() {
            let es = cfg.convention.es_n0_db(snr);
            let tally = (0..cfg.trials)
                .into_par_iter()
                .map(|k| {
                    let noise = standard_noise(&mut stream_rng(cfg.seed, j as u64, k), n);
                    let log_u = log_odds_from_noise(es, &zero, &noise);
                    let out = decoder.run(&log_u, eps, cfg.max_iter)?;
                    let mut t = Tally { iters: out.iterations as u64, ..Tally::default() };
                    match out.status {
                        DecodeStatus::Converged(w) if w.iter().all(|&b| b == 0) => {}
                        DecodeStatus::Converged(_) => t.errors = 1,
                        DecodeStatus::MaxIterations | DecodeStatus::NumericEscape => t.nonconv = 1,
                    }
                    Ok::<_, Error>(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a + b))?;
            records.push(SimRecord {
                graph: name.to_string(),
                epsilon: eps,
                snr_db: snr,
                trials: cfg.trials,
                word_errors: tally.errors,
                nonconvergences: tally.nonconv,
                total_iterations: tally.iters,
            });
        }
    }
    Ok(records)
}

/// Fraction of trials whose decoder outcome matches the spectral verdict on
/// the realised input, over trials with margin at least `min_margin`.
/// Returns `(eligible, matches)`.
pub fn prediction_consistency(
    graph: &BipartiteGraph,
    snr_db: f64,
    trials: u64,
    seed: u64,
    eps: f64,
    max_iter: usize,
    min_margin: f64,
) -> Result<(u64, u64)> {
    let summary = perron(&build_structural(graph)?)?;
    let decoder = LogDecoder::new(graph);
    let n = graph.bit_count();
    let zero = vec![0u8; n];
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let noise = standard_noise(&mut stream_rng(seed, 0, k), n);
            let log_u = log_odds_from_noise(snr_db, &zero, &noise);
            let p = predict_log(&summary, &log_u, crate::spectral::DEFAULT_TOLERANCE)?;
            if p.margin < min_margin {
                return Ok((0, 0));
            }
            let out = decoder.run(&log_u, eps, max_iter)?;
            Ok::<_, Error>((1, u64::from(outcome_matches(&out.status, p.verdict))))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
}

pub const CSV_HEADER: &str = "graph,epsilon,snr_db,trials,wer,ncr,avg_iters";

/// CSV with the documented header; numbers at 12 significant digits.
pub fn summarize(records: &[SimRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).map_err(|e| Error::Io(e.to_string()))?;
    for r in records {
        if r.trials == 0 {
            return Err(Error::InvalidInput(format!("record for {} has zero trials", r.graph)));
        }
        w.write_record([
            r.graph.clone(),
            fmt_g(r.epsilon),
            fmt_g(r.snr_db),
            r.trials.to_string(),
            fmt_g(r.wer()),
            fmt_g(r.ncr()),
            fmt_g(r.avg_iters()),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

#[derive(Deserialize)]
struct CsvRow {
    graph: String,
    epsilon: f64,
    snr_db: f64,
    trials: u64,
    wer: f64,
    ncr: f64,
    avg_iters: f64,
}

/// Inverse of [`summarize`]; counts are recovered by rounding.
pub fn parse_csv(text: &str) -> Result<Vec<SimRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize::<CsvRow>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.map_err(|e| Error::Parse { line: i + 2, message: e.to_string() })?;
            if row.trials == 0 {
                return Err(Error::Parse { line: i + 2, message: "zero trials".into() });
            }
            let t = row.trials as f64;
            Ok(SimRecord {
                graph: row.graph,
                epsilon: row.epsilon,
                snr_db: row.snr_db,
                trials: row.trials,
                word_errors: (row.wer * t).round() as u64,
                nonconvergences: (row.ncr * t).round() as u64,
                total_iterations: (row.avg_iters * t).round() as u64,
            })
        })
        .collect()
}

/// Standard error of a binomial proportion estimate.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// SNR at which a failure-rate curve crosses `level`, by linear
/// interpolation of `log10(rate)` between adjacent points. Curves must be
/// sorted by SNR; zero rates are skipped.
pub fn snr_at_rate(points: &[(f64, f64)], level: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(s, r)| (s, r.log10())).collect();
    let target = level.log10();
    pts.windows(2).find_map(|w| {
        let ((s0, r0), (s1, r1)) = (w[0], w[1]);
        if (r0 - target) * (r1 - target) <= 0.0 && r0 != r1 {
            Some(s0 + (target - r0) * (s1 - s0) / (r1 - r0))
        } else {
            None
        }
    })
}

/// Mean horizontal gap `b - a` (dB) between two failure curves over the
/// given rate levels; levels not crossed by both curves are skipped.
pub fn horizontal_gap(a: &[(f64, f64)], b: &[(f64, f64)], levels: &[f64]) -> Option<(f64, Vec<(f64, f64)>)> {
    let per: Vec<(f64, f64)> = levels.iter().filter_map(|&l| Some((l, snr_at_rate(b, l)? - snr_at_rate(a, l)?))).collect();
    if per.is_empty() {
        return None;
    }
    Some((per.iter().map(|p| p.1).sum::<f64>() / per.len() as f64, per))
}

/// Static SVG: one polyline of `log10(wer + ncr)` per `(graph, epsilon)`.
pub fn render_svg(records: &[SimRecord]) -> String {
    let (w, h, pad) = (640.0, 420.0, 50.0);
    let pts: Vec<&SimRecord> = records.iter().filter(|r| r.failure_rate() > 0.0).collect();
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in records {
        xmin = xmin.min(r.snr_db);
        xmax = xmax.max(r.snr_db);
    }
    for r in &pts {
        let y = r.failure_rate().log10();
        ymin = ymin.min(y.floor());
        ymax = ymax.max(y.ceil());
    }
    if !xmin.is_finite() || xmax <= xmin {
        xmax = xmin.max(0.0) + 1.0;
        xmin = xmax - 1.0;
    }
    if !ymin.is_finite() || ymax <= ymin {
        ymin = -1.0;
        ymax = 0.0;
    }
    let sx = |x: f64| pad + (x - xmin) / (xmax - xmin) * (w - 2.0 * pad);
    let sy = |y: f64| pad + (ymax - y) / (ymax - ymin) * (h - 2.0 * pad);
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#, w - 2.0 * pad, h - 2.0 * pad);
    let mut decade = ymin;
    while decade <= ymax {
        let _ = writeln!(svg, r#"<text x="5" y="{:.1}">1e{}</text>"#, sy(decade) + 4.0, decade as i64);
        decade += 1.0;
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}">SNR (dB): {} to {}</text>"#, w / 2.0 - 50.0, h - 15.0, fmt_g(xmin), fmt_g(xmax));
    let mut series: Vec<(String, f64)> = Vec::new();
    for r in records {
        if !series.iter().any(|(g, e)| *g == r.graph && *e == r.epsilon) {
            series.push((r.graph.clone(), r.epsilon));
        }
    }
    for (i, (g, e)) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let line: Vec<String> = pts
            .iter()
            .filter(|r| r.graph == *g && r.epsilon == *e)
            .map(|r| format!("{:.1},{:.1}", sx(r.snr_db), sy(r.failure_rate().log10())))
            .collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" points="{}"/>"#, line.join(" "));
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}">{g} eps={}</text>"#,
            w - pad - 150.0,
            pad + 14.0 * (i as f64 + 1.0),
            fmt_g(*e)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
