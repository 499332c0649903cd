//! Sum-product decoding on bipartite graphs.
//!
//! Two implementations share one contract:
//!
//! * [`spa_step`] is the textbook odds-domain update, generic over
//!   [`OddsValue`] so it can run in exact rational arithmetic.
//! * [`LogDecoder`] runs in log-odds. Degree-2 checks are a pure swap of
//!   messages; other checks use the `tanh` form with `|log y|` clamped at 700.
//!
//! Stopping rule: every bit must satisfy `u_hat < eps` or `u_hat > 1/eps`
//! and the resulting hard decision must satisfy every check.

mod local_sum;

pub use local_sum::{local_sum_run, ExponentMatrix};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_EPSILON: f64 = 1e-8;
const LOG_CLAMP: f64 = 700.0;

/// `s(x) = (1 - x) / (1 + x)` on `[0, +inf]`, with `s(+inf) = -1`.
pub fn transform_s(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidInput(format!("s-transform needs x >= 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(-1.0);
    }
    Ok((1.0 - x) / (1.0 + x))
}

/// Scalar type for the odds-domain reference decoder.
pub trait OddsValue: Clone + PartialEq + Debug {
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `s` on the extended domain; `None` at the pole `x = -1`.
    fn s(&self) -> Option<Self>;
    /// True when the value cannot represent an odds ratio any more.
    fn escaped(&self) -> bool;
}

impl OddsValue for f64 {
    fn one() -> Self {
        1.0
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn s(&self) -> Option<Self> {
        if self.is_infinite() && *self > 0.0 {
            return Some(-1.0);
        }
        let v = (1.0 - self) / (1.0 + self);
        v.is_finite().then_some(v)
    }

    fn escaped(&self) -> bool {
        !self.is_finite()
    }
}

impl OddsValue for BigRational {
    fn one() -> Self {
        One::one()
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn s(&self) -> Option<Self> {
        let one = <BigRational as One>::one();
        let den = &one + self;
        (!den.is_zero()).then(|| (&one - self) / den)
    }

    fn escaped(&self) -> bool {
        false
    }
}

/// Converts an `f64` odds vector to exact rationals.
pub fn rational_odds(u: &[f64]) -> Result<Vec<BigRational>> {
    u.iter().map(|&v| BigRational::from_float(v).ok_or_else(|| Error::InvalidInput(format!("{v} is not finite")))).collect()
}

/// Per-edge messages after `t` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub t: usize,
}

impl<T: OddsValue> MessageState<T> {
    /// `y = 1` everywhere; `x` is overwritten by the first step.
    pub fn initial(b: &BipartiteGraph) -> Self {
        let n = b.edge_count();
        Self { x: vec![T::one(); n], y: vec![T::one(); n], t: 0 }
    }
}

/// One bit-to-check and one check-to-bit update for any check degrees.
pub fn spa_step<T: OddsValue>(b: &BipartiteGraph, u: &[T], m: &MessageState<T>) -> Result<MessageState<T>> {
    let n = b.edge_count();
    if u.len() != b.bit_count() || m.x.len() != n || m.y.len() != n {
        return Err(Error::InvalidInput("message state does not match the graph".into()));
    }
    let t = m.t + 1;
    let mut x = vec![T::one(); n];
    for (bit, ub) in u.iter().enumerate() {
        let at = b.edges_at_bit(bit);
        for &e in at {
            let mut v = ub.clone();
            for &f in at {
                if f != e {
                    v = v.mul(&m.y[f]);
                }
            }
            x[e] = v;
        }
    }
    let mut sx = Vec::with_capacity(n);
    for v in &x {
        if v.escaped() {
            return Err(Error::NumericEscape { iteration: t });
        }
        sx.push(v.s().ok_or(Error::NumericEscape { iteration: t })?);
    }
    let mut y = vec![T::one(); n];
    for check in 0..b.check_count() {
        let at = b.edges_at_check(check);
        for &e in at {
            let mut p = T::one();
            for &f in at {
                if f != e {
                    p = p.mul(&sx[f]);
                }
            }
            let v = p.s().ok_or(Error::NumericEscape { iteration: t })?;
            if v.escaped() {
                return Err(Error::NumericEscape { iteration: t });
            }
            y[e] = v;
        }
    }
    Ok(MessageState { x, y, t })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeStatus {
    Converged(Vec<u8>),
    MaxIterations,
    NumericEscape,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub iterations: usize,
    /// `log u_hat` per bit after the last completed iteration.
    pub final_estimates: Vec<f64>,
}

impl DecodeOutcome {
    pub fn codeword(&self) -> Option<&[u8]> {
        match &self.status {
            DecodeStatus::Converged(w) => Some(w),
            _ => None,
        }
    }
}

/// Hard decision from log estimates: 1 iff `u_hat > 1`.
pub fn hard_decision(log_u_hat: &[f64]) -> Vec<u8> {
    log_u_hat.iter().map(|&v| u8::from(v > 0.0)).collect()
}

/// Renders a word as `0101`.
pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// True when every check sees an even number of ones.
pub fn satisfies_checks(b: &BipartiteGraph, w: &[u8]) -> bool {
    (0..b.check_count()).all(|c| b.edges_at_check(c).iter().map(|&e| w[b.bit_of(e)] as usize).sum::<usize>() % 2 == 0)
}

fn check_run_args(b: &BipartiteGraph, n: usize, eps: f64, max_iter: usize) -> Result<()> {
    if n != b.bit_count() {
        return Err(Error::InvalidInput(format!("{n} input values for {} bits", b.bit_count())));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1".into()));
    }
    Ok(())
}

/// Log-domain messages after one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMessages {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u_hat: Vec<f64>,
}

/// Log-domain sum-product decoder bound to one graph.
#[derive(Debug, Clone)]
pub struct LogDecoder<'a> {
    graph: &'a BipartiteGraph,
    partner: Option<Vec<usize>>,
}

impl<'a> LogDecoder<'a> {
    pub fn new(graph: &'a BipartiteGraph) -> Self {
        let partner = graph.all_checks_degree2().then(|| {
            let mut p = vec![0; graph.edge_count()];
            for c in 0..graph.check_count() {
                let at = graph.edges_at_check(c);
                p[at[0]] = at[1];
                p[at[1]] = at[0];
            }
            p
        });
        Self { graph, partner }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        self.graph
    }

    fn bit_to_check(&self, log_u: &[f64], y: &[f64], x: &mut [f64]) {
        let b = self.graph;
        for (bit, &lb) in log_u.iter().enumerate() {
            let at = b.edges_at_bit(bit);
            for &e in at {
                let mut v = lb;
                for &f in at {
                    if f != e {
                        v += y[f];
                    }
                }
                x[e] = v;
            }
        }
    }

    fn check_to_bit(&self, x: &[f64], y: &mut [f64]) {
        if let Some(p) = &self.partner {
            for (e, &f) in p.iter().enumerate() {
                y[e] = x[f];
            }
            return;
        }
        let b = self.graph;
        for c in 0..b.check_count() {
            let at = b.edges_at_check(c);
            for &e in at {
                let mut prod = 1.0;
                for &f in at {
                    if f != e {
                        prod *= -(x[f] / 2.0).tanh();
                    }
                }
                y[e] = (-2.0 * prod.atanh()).clamp(-LOG_CLAMP, LOG_CLAMP);
            }
        }
    }

    fn estimates(&self, log_u: &[f64], y: &[f64], u_hat: &mut [f64]) {
        let b = self.graph;
        for bit in 0..b.bit_count() {
            u_hat[bit] = log_u[bit] + b.edges_at_bit(bit).iter().map(|&e| y[e]).sum::<f64>();
        }
    }

    /// Messages for iterations `1..=t`, without any stopping test.
    pub fn trajectory(&self, log_u: &[f64], t: usize) -> Result<Vec<LogMessages>> {
        check_run_args(self.graph, log_u.len(), 0.5, 1)?;
        let n = self.graph.edge_count();
        let mut y = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut out = Vec::with_capacity(t);
        for _ in 0..t {
            self.bit_to_check(log_u, &y, &mut x);
            self.check_to_bit(&x, &mut y);
            let mut u_hat = vec![0.0; self.graph.bit_count()];
            self.estimates(log_u, &y, &mut u_hat);
            out.push(LogMessages { x: x.clone(), y: y.clone(), u_hat });
        }
        Ok(out)
    }

    /// Runs until the stopping rule fires or `max_iter` iterations elapse.
    pub fn run(&self, log_u: &[f64], eps: f64, max_iter: usize) -> Result<DecodeOutcome> {
        let b = self.graph;
        check_run_args(b, log_u.len(), eps, max_iter)?;
        if log_u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("log-odds must be finite".into()));
        }
        let threshold = (1.0 / eps).ln();
        let n = b.edge_count();
        let mut y = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut u_hat = vec![0.0; b.bit_count()];
        for t in 1..=max_iter {
            self.bit_to_check(log_u, &y, &mut x);
            self.check_to_bit(&x, &mut y);
            self.estimates(log_u, &y, &mut u_hat);
            if u_hat.iter().any(|v| !v.is_finite()) {
                return Ok(DecodeOutcome { status: DecodeStatus::NumericEscape, iterations: t, final_estimates: u_hat });
            }
            if u_hat.iter().all(|v| v.abs() > threshold) {
                let w = hard_decision(&u_hat);
                if satisfies_checks(b, &w) {
                    return Ok(DecodeOutcome { status: DecodeStatus::Converged(w), iterations: t, final_estimates: u_hat });
                }
            }
        }
        Ok(DecodeOutcome { status: DecodeStatus::MaxIterations, iterations: max_iter, final_estimates: u_hat })
    }
}

/// Log-domain runner: same contract as [`spa_run`] with `log u` inputs.
pub fn spa_log_run(b: &BipartiteGraph, log_u: &[f64], eps: f64, max_iter: usize) -> Result<DecodeOutcome> {
    LogDecoder::new(b).run(log_u, eps, max_iter)
}

/// Decodes odds inputs `u_l = p_l(1) / p_l(0)`.
pub fn spa_run(b: &BipartiteGraph, u: &[f64], eps: f64, max_iter: usize) -> Result<DecodeOutcome> {
    if let Some(bad) = u.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidInput(format!("odds must be positive and finite, got {bad}")));
    }
    let log_u: Vec<f64> = u.iter().map(|v| v.ln()).collect();
    spa_log_run(b, &log_u, eps, max_iter)
}

/// Odds-domain run built on [`spa_step`], with the same stopping rule.
/// Overflow ends the run with [`DecodeStatus::NumericEscape`].
pub fn spa_reference_run(b: &BipartiteGraph, u: &[f64], eps: f64, max_iter: usize) -> Result<DecodeOutcome> {
    check_run_args(b, u.len(), eps, max_iter)?;
    let mut m = MessageState::<f64>::initial(b);
    let mut u_hat = vec![0.0; b.bit_count()];
    for t in 1..=max_iter {
        m = match spa_step(b, u, &m) {
            Ok(next) => next,
            Err(Error::NumericEscape { .. }) => {
                return Ok(DecodeOutcome { status: DecodeStatus::NumericEscape, iterations: t, final_estimates: u_hat })
            }
            Err(e) => return Err(e),
        };
        for bit in 0..b.bit_count() {
            let prod: f64 = b.edges_at_bit(bit).iter().map(|&e| m.y[e]).product();
            u_hat[bit] = (u[bit] * prod).ln();
        }
        if u_hat.iter().any(|v| !v.is_finite()) {
            return Ok(DecodeOutcome { status: DecodeStatus::NumericEscape, iterations: t, final_estimates: u_hat });
        }
        if u_hat.iter().all(|v| v.abs() > (1.0 / eps).ln()) {
            let w = hard_decision(&u_hat);
            if satisfies_checks(b, &w) {
                return Ok(DecodeOutcome { status: DecodeStatus::Converged(w), iterations: t, final_estimates: u_hat });
            }
        }
    }
    Ok(DecodeOutcome { status: DecodeStatus::MaxIterations, iterations: max_iter, final_estimates: u_hat })
}

/// Exact rational value `p / q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, to_bipartite, Generator};

    fn bip(g: Generator) -> BipartiteGraph {
        to_bipartite(&generate(&g).unwrap())
    }

    #[test]
    fn s_transform_values() {
        assert_eq!(transform_s(1.0).unwrap(), 0.0);
        assert_eq!(transform_s(0.0).unwrap(), 1.0);
        assert_eq!(transform_s(3.0).unwrap(), -0.5);
        assert_eq!(transform_s(f64::INFINITY).unwrap(), -1.0);
        let v = transform_s(transform_s(0.37).unwrap()).unwrap();
        assert!((v - 0.37).abs() < 1e-15);
        assert!(transform_s(-0.1).is_err());
    }

    #[test]
    fn rational_s_is_involution() {
        let x = ratio(37, 100);
        assert_eq!(x.s().unwrap().s().unwrap(), x);
        assert_eq!(ratio(-1, 1).s(), None);
    }

    #[test]
    fn unit_odds_is_fixed_point() {
        let b = bip(Generator::Complete(4));
        let mut m = MessageState::<f64>::initial(&b);
        for _ in 0..5 {
            m = spa_step(&b, &[1.0; 4], &m).unwrap();
            assert!(m.x.iter().chain(&m.y).all(|&v| v == 1.0));
        }
    }

    #[test]
    fn first_step_copies_inputs() {
        let b = bip(Generator::Example52);
        let u = [0.5, 0.5, 4.5];
        let m = spa_step(&b, &u, &MessageState::initial(&b)).unwrap();
        for e in 0..b.edge_count() {
            assert_eq!(m.x[e], u[b.bit_of(e)]);
        }
    }

    #[test]
    fn example_5_2_decodes_to_zero() {
        let b = bip(Generator::Example52);
        let out = spa_run(&b, &[0.5, 0.5, 4.5], 1e-8, 200).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged(vec![0, 0, 0]));
    }

    #[test]
    fn k4_all_half_decodes_to_zero() {
        let out = spa_run(&bip(Generator::Complete(4)), &[0.5; 4], 1e-8, 200).unwrap();
        assert_eq!(out.codeword(), Some(&[0u8, 0, 0, 0][..]));
    }

    #[test]
    fn dipole_region_does_not_converge() {
        let out = spa_run(&bip(Generator::Dipole(3)), &[2.0, 0.6], 1e-8, 500).unwrap();
        assert_eq!(out.status, DecodeStatus::MaxIterations);
        assert_eq!(out.iterations, 500);
    }

    #[test]
    fn zero_log_odds_never_terminates() {
        let out = spa_log_run(&bip(Generator::Example52), &[0.0; 3], 1e-8, 50).unwrap();
        assert_eq!(out.status, DecodeStatus::MaxIterations);
    }

    #[test]
    fn extreme_inputs_do_not_overflow() {
        let out = spa_log_run(&bip(Generator::Example52), &[-50.0, -50.0, 50.0], 1e-8, 200).unwrap();
        assert_eq!(out.status, DecodeStatus::Converged(vec![0, 0, 0]));
    }

    #[test]
    fn reference_agrees_on_example_5_2() {
        let b = bip(Generator::Example52);
        let a = spa_reference_run(&b, &[0.5, 0.5, 4.5], 1e-8, 200).unwrap();
        let l = spa_run(&b, &[0.5, 0.5, 4.5], 1e-8, 200).unwrap();
        assert_eq!(a.status, l.status);
        assert_eq!(a.iterations, l.iterations);
    }

    #[test]
    fn conjugate_law_exact() {
        let b = bip(Generator::Example52);
        let u = rational_odds(&[0.5, 0.25, 4.5]).unwrap();
        let mut m = MessageState::<BigRational>::initial(&b);
        for _ in 0..4 {
            m = spa_step(&b, &u, &m).unwrap();
            for c in 0..b.check_count() {
                let at = b.edges_at_check(c);
                assert_eq!(m.y[at[0]], m.x[at[1]]);
                assert_eq!(m.y[at[1]], m.x[at[0]]);
            }
        }
    }

    #[test]
    fn general_degree_check() {
        // single parity check on three bits: bit 2 learns from bits 0 and 1
        let b = BipartiteGraph::new(3, 1, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        let m = spa_step(&b, &[0.5, 0.5, 1.0], &MessageState::initial(&b)).unwrap();
        let s = transform_s(0.5).unwrap();
        assert!((m.y[2] - transform_s(s * s).unwrap()).abs() < 1e-15);
        let log = LogDecoder::new(&b).trajectory(&[0.5f64.ln(), 0.5f64.ln(), 0.0], 1).unwrap();
        assert!((log[0].y[2] - m.y[2].ln()).abs() < 1e-12);
    }

    #[test]
    fn argument_validation() {
        let b = bip(Generator::Example52);
        assert!(spa_run(&b, &[0.5, 0.5], 1e-8, 10).is_err());
        assert!(spa_run(&b, &[0.5, 0.5, 0.0], 1e-8, 10).is_err());
        assert!(spa_run(&b, &[0.5; 3], 1.5, 10).is_err());
        assert!(spa_run(&b, &[0.5; 3], 1e-8, 0).is_err());
    }
}
