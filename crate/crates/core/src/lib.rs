//! Sum-product decoding on bipartite graphs whose checks all have degree 2.
//!
//! On such graphs every SPA message is a monomial in the channel odds, and
//! the exponents evolve linearly through the non-backtracking flow matrix
//! `K`. The Perron data of `K` therefore decides whether decoding converges,
//! and to which word.
//!
//! * [`graph`]: undirected, bipartite and flow-graph forms, named fixtures,
//!   text formats.
//! * [`decoder`]: odds-domain reference SPA, log-domain runner, exponent
//!   recursion.
//! * [`spectral`]: structural matrices, Perron vectors, influence vectors,
//!   convergence prediction, full spectra.
//! * [`trapping`]: trapping-set cores, virtual-bit augmentation, the
//!   effective-input law.
//! * [`sim`]: BPSK/AWGN Monte Carlo runs and CSV/SVG output.
//! * [`report`]: text and CSV output formats.
//! * [`verify`]: property suites shared by the CLI and the tests.

pub mod decoder;
pub mod error;
pub mod graph;
pub mod report;
pub mod rng;
pub mod sim;
pub mod spectral;
pub mod trapping;
pub mod verify;

pub use error::{Error, Result};

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

/// `%.{digits}g`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(1.69562076956), "1.69562076956");
        assert_eq!(fmt_g(1.6956207695598593), "1.69562076956");
        assert_eq!(fmt_g(-0.5), "-0.5");
        assert_eq!(fmt_g(1e-8), "1e-08");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g(2.0f64.sqrt()), "1.41421356237");
        assert_eq!(fmt_g(100.0), "100");
        assert_eq!(fmt_g(0.0123), "0.0123");
    }
}
