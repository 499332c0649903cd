use super::{SpectralSummary, StructuralMatrices};
use crate::error::{Error, Result};
use std::fmt;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Zero,
    One,
    NonConvergent,
    Boundary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "ZERO",
            Verdict::One => "ONE",
            Verdict::NonConvergent => "NONCONVERGENT",
            Verdict::Boundary => "BOUNDARY",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub verdict: Verdict,
    /// `log U_r` for `r = 0..h`.
    pub exponents: Vec<f64>,
    /// `min_r |log U_r|`.
    pub margin: f64,
}

/// Prediction from odds inputs.
pub fn predict(s: &SpectralSummary, u: &[f64], tol: f64) -> Result<Prediction> {
    if let Some(bad) = u.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidInput(format!("odds must be positive and finite, got {bad}")));
    }
    let log_u: Vec<f64> = u.iter().map(|v| v.ln()).collect();
    predict_log(s, &log_u, tol)
}

/// `log U_r = sum_j rho^j <c_{r+j}, log u>`, block subscripts taken mod `h`
/// with representatives `1..h`. For `h = 1` this is `<c, log u>`.
pub fn predict_log(s: &SpectralSummary, log_u: &[f64], tol: f64) -> Result<Prediction> {
    Ok(verdict_from_exponents(phase_exponents(s, log_u)?, tol))
}

/// The `h` values `log U_r`.
///
/// At iteration `t`, an edge in class `k` (0-based) has the sign of
/// `log U_{(t + k + 1) mod h}` once `t` is large.
pub fn phase_exponents(s: &SpectralSummary, log_u: &[f64]) -> Result<Vec<f64>> {
    if log_u.len() != s.c.len() {
        return Err(Error::InvalidInput(format!("{} input values for {} bits", log_u.len(), s.c.len())));
    }
    let h = s.h;
    if h == 1 {
        return Ok(vec![dot(&s.c, log_u)]);
    }
    let inner: Vec<f64> = s.c_blocks.iter().map(|c| dot(c, log_u)).collect();
    Ok((0..h).map(|r| (0..h).map(|j| s.rho.powi(j as i32) * inner[(r + j + h - 1) % h]).sum()).collect())
}

/// Sign test on a set of phase exponents.
pub fn verdict_from_exponents(exponents: Vec<f64>, tol: f64) -> Prediction {
    let margin = exponents.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let verdict = if margin < tol {
        Verdict::Boundary
    } else if exponents.iter().all(|&x| x < 0.0) {
        Verdict::Zero
    } else if exponents.iter().all(|&x| x > 0.0) {
        Verdict::One
    } else {
        Verdict::NonConvergent
    };
    Prediction { verdict, exponents, margin }
}

/// What the stopping rule does in the long run, phase by phase.
///
/// The estimate at bit `l` collects `x_conj(e)` over edges `e` at `l`, and
/// those edges may sit in classes whose exponents disagree. For `h >= 3`
/// every estimate can share one sign at some phases even though the
/// exponents are mixed, and the decoder then stops there.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationPrediction {
    /// `Zero`/`One`: every phase that passes the test gives that word.
    /// `NonConvergent`: no phase does. `Boundary`: both words occur, or some
    /// limiting estimate is within tolerance of 0.
    pub verdict: Verdict,
    /// Word (all-zero or all-one) at iterations `t = r mod h`, if any.
    pub phase_words: Vec<Option<u8>>,
    /// `min |limiting log u_hat|` over bits and phases.
    pub margin: f64,
}

/// Limiting estimate signs from the phase exponents (of `u`, or of an
/// effective combination such as [`crate::trapping::augmented_exponents`]).
pub fn predict_termination(s: &SpectralSummary, m: &StructuralMatrices, exponents: &[f64], tol: f64) -> Result<TerminationPrediction> {
    let h = s.h;
    if exponents.len() != h {
        return Err(Error::InvalidInput(format!("{} exponents for h = {h}", exponents.len())));
    }
    let mut margin = f64::INFINITY;
    let mut phase_words = Vec::with_capacity(h);
    for r in 0..h {
        let mut v = vec![0.0; m.bit_count()];
        for e in 0..m.edge_count() {
            let f = m.conj(e);
            v[m.bit_of(e)] += s.z[f] * exponents[(r + s.partition.class_of(f) + 1) % h];
        }
        margin = v.iter().fold(margin, |a, x| a.min(x.abs()));
        phase_words.push(if v.iter().all(|&x| x < 0.0) {
            Some(0)
        } else if v.iter().all(|&x| x > 0.0) {
            Some(1)
        } else {
            None
        });
    }
    Ok(TerminationPrediction::from_words(phase_words, margin, tol))
}

impl TerminationPrediction {
    pub fn from_words(phase_words: Vec<Option<u8>>, margin: f64, tol: f64) -> Self {
        let zero = phase_words.contains(&Some(0));
        let one = phase_words.contains(&Some(1));
        let verdict = match (zero, one) {
            _ if margin < tol => Verdict::Boundary,
            (true, true) => Verdict::Boundary,
            (true, false) => Verdict::Zero,
            (false, true) => Verdict::One,
            (false, false) => Verdict::NonConvergent,
        };
        Self { verdict, phase_words, margin }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limiting bases in the primitive case, kept as logarithms:
/// `log x_e(t) ~ (rho^t - 1)/(rho - 1) * edge_log_base[e]` and likewise for
/// `log u_hat_l(t)` with `bit_log_base[l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRate {
    /// `z_e <c, log u>`.
    pub edge_log_base: Vec<f64>,
    /// `(sum over e at l of z_conj(e)) <c, log u>`: the estimate at `l`
    /// collects `y_e = x_conj(e)`.
    pub bit_log_base: Vec<f64>,
}

impl ConvergenceRate {
    pub fn edge_base(&self, e: usize) -> f64 {
        self.edge_log_base[e].exp()
    }

    pub fn bit_base(&self, l: usize) -> f64 {
        self.bit_log_base[l].exp()
    }
}

pub fn convergence_rate(s: &SpectralSummary, m: &StructuralMatrices, log_u: &[f64]) -> Result<ConvergenceRate> {
    if s.h != 1 {
        return Err(Error::ImprimitiveNotSupported { h: s.h });
    }
    if log_u.len() != m.bit_count() {
        return Err(Error::InvalidInput(format!("{} input values for {} bits", log_u.len(), m.bit_count())));
    }
    let uc = dot(&s.c, log_u);
    let edge_log_base: Vec<f64> = s.z.iter().map(|z| z * uc).collect();
    let mut bit_log_base = vec![0.0; m.bit_count()];
    for e in 0..m.edge_count() {
        bit_log_base[m.bit_of(e)] += s.z[m.conj(e)] * uc;
    }
    Ok(ConvergenceRate { edge_log_base, bit_log_base })
}
