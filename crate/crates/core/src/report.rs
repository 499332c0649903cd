//! Text and CSV serializations used by the command-line front end.

use crate::decoder::{word_string, DecodeOutcome, DecodeStatus};
use crate::fmt_g;
use crate::spectral::{SpectralSummary, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

fn join(v: &[f64], sep: &str) -> String {
    v.iter().map(|&x| fmt_g(x)).collect::<Vec<_>>().join(sep)
}

/// Report of `analyze`.
pub fn analysis(s: &SpectralSummary, strongly_connected: bool, format: Format) -> String {
    let sizes: Vec<String> = s.partition.sizes().iter().map(ToString::to_string).collect();
    let c = s.c_normalized();
    match format {
        Format::Text => format!(
            "rho {}\nh {}\nstrongly_connected {}\npartition_sizes {}\nc {}\nright_residual {}\nleft_residual {}\n",
            fmt_g(s.rho),
            s.h,
            strongly_connected,
            sizes.join(" "),
            join(&c, " "),
            fmt_g(s.right_residual),
            fmt_g(s.left_residual)
        ),
        Format::Csv => format!(
            "rho,h,strongly_connected,partition_sizes,c,right_residual,left_residual\n{},{},{},{},{},{},{}\n",
            fmt_g(s.rho),
            s.h,
            strongly_connected,
            sizes.join(";"),
            join(&c, ";"),
            fmt_g(s.right_residual),
            fmt_g(s.left_residual)
        ),
    }
}

/// `CONVERGED <word> iters=<n>`, `NONCONVERGENT iters=<n>` or
/// `ESCAPE iters=<n>`.
pub fn decode_line(out: &DecodeOutcome) -> String {
    match &out.status {
        DecodeStatus::Converged(w) => format!("CONVERGED {} iters={}", word_string(w), out.iterations),
        DecodeStatus::MaxIterations => format!("NONCONVERGENT iters={}", out.iterations),
        DecodeStatus::NumericEscape => format!("ESCAPE iters={}", out.iterations),
    }
}

/// One `re im` line per eigenvalue.
pub fn spectrum_lines(s: &Spectrum, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("re,im\n");
    }
    let sep = if format == Format::Csv { "," } else { " " };
    for z in &s.eigenvalues {
        // avoid printing "-0"
        let im = if z.im == 0.0 { 0.0 } else { z.im };
        out.push_str(&format!("{}{sep}{}\n", fmt_g(z.re), fmt_g(im)));
    }
    out
}

/// Parses `a:step:b` into an inclusive grid.
pub fn parse_grid(text: &str) -> Option<Vec<f64>> {
    let parts: Vec<f64> = text.split(':').map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [x] => Some(vec![x]),
        [a, step, b] if step > 0.0 && b >= a => {
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Some((0..=n).map(|i| a + step * i as f64).collect())
        }
        _ => None,
    }
}
