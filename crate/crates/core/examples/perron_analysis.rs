//! Perron root, Perron vectors and the influence vector of a graph.
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::report::{analysis, Format};
use deg2spa::spectral::{build_structural, perron};

fn main() -> deg2spa::Result<()> {
    for g in [Generator::Example52, Generator::Ts53Girth8, Generator::Fig5C] {
        let m = build_structural(&to_bipartite(&generate(&g)?))?;
        let s = perron(&m)?;
        println!("== {g}");
        print!("{}", analysis(&s, m.flow().is_strongly_connected(), Format::Text));
        let yz: f64 = s.y_star.iter().zip(&s.z).map(|(a, b)| a * b).sum();
        println!("y*.z = {yz:.12}, power iterations {}\n", s.power_iterations);
    }
    Ok(())
}
