//! Predicted decoder outcome across a grid of inputs, compared with the
//! decoder itself. The dipole has two phases, so mixed-sign exponents mean
//! oscillation.
use deg2spa::decoder::{spa_log_run, DecodeStatus};
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::spectral::{build_structural, perron, predict_log, Verdict};

fn glyph(v: Verdict) -> char {
    match v {
        Verdict::Zero => '0',
        Verdict::One => '1',
        Verdict::NonConvergent => '~',
        Verdict::Boundary => '.',
    }
}

fn main() -> deg2spa::Result<()> {
    let b = to_bipartite(&generate(&Generator::Dipole(3))?);
    let s = perron(&build_structural(&b)?)?;
    let axis: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.25).collect();
    let (mut agree, mut total) = (0, 0);
    println!("log u2 down, log u1 across; predicted | decoded");
    for &y in axis.iter().rev() {
        let (mut pred, mut dec) = (String::new(), String::new());
        for &x in &axis {
            let p = predict_log(&s, &[x, y], 1e-9)?;
            let out = spa_log_run(&b, &[x, y], 1e-8, 300)?;
            let d = match out.status {
                DecodeStatus::Converged(ref w) if w[0] == 0 => '0',
                DecodeStatus::Converged(_) => '1',
                _ => '~',
            };
            pred.push(glyph(p.verdict));
            dec.push(d);
            if p.verdict != Verdict::Boundary {
                total += 1;
                agree += usize::from(glyph(p.verdict) == d);
            }
        }
        println!("{pred} | {dec}");
    }
    println!("agreement off the boundary: {agree}/{total}");
    Ok(())
}
