//! Full flow-matrix spectra: a graph cover contains the spectrum of its base.
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::report::{spectrum_lines, Format};
use deg2spa::spectral::{build_structural, full_spectrum};

fn main() -> deg2spa::Result<()> {
    let spec = |g: Generator| -> deg2spa::Result<_> { full_spectrum(&build_structural(&to_bipartite(&generate(&g)?))?.k_f64()) };
    let base = spec(Generator::Dipole(3))?;
    println!("dipole spectrum:\n{}", spectrum_lines(&base, Format::Text));
    for g in [Generator::Cover2Dipole3, Generator::Cover3Girth4, Generator::Cover3Two2Cycles, Generator::Cover3Three2Cycles] {
        let s = spec(g)?;
        println!(
            "{g:<22} {} eigenvalues, radius {:.9}, {} on the circle, contains base: {}",
            s.len(),
            s.radius(),
            s.count_of_modulus(s.radius(), 1e-6),
            s.contains(&base, 1e-6)
        );
    }
    Ok(())
}
