//! BPSK/AWGN Monte Carlo on a trapping-set core, written as CSV and SVG to
//! the temp directory.
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::sim::{render_svg, repetition_rate, run_trials, summarize, SimConfig, SnrConvention};

fn main() -> deg2spa::Result<()> {
    let b = to_bipartite(&generate(&Generator::Ts53Girth8)?);
    let snr: Vec<f64> = (0..=16).map(|i| i as f64 * 0.5).collect();
    let mut cfg = SimConfig::new(vec![1e-2, 1e-4, 1e-8], snr, 2000, 1);
    cfg.convention = SnrConvention::EbN0 { rate: repetition_rate(&b) };
    let records = run_trials(&b, "ts53_girth8", &cfg)?;
    let csv = summarize(&records)?;
    print!("{csv}");
    let dir = std::env::temp_dir();
    std::fs::write(dir.join("awgn_simulation.csv"), &csv).map_err(|e| deg2spa::Error::Io(e.to_string()))?;
    std::fs::write(dir.join("awgn_simulation.svg"), render_svg(&records)).map_err(|e| deg2spa::Error::Io(e.to_string()))?;
    println!("wrote {}", dir.join("awgn_simulation.{csv,svg}").display());
    Ok(())
}
