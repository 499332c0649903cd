//! Named fixtures, the `.ug`/`.bg` text formats and validation.
use deg2spa::graph::io::{parse_ug, write_bg, write_ug};
use deg2spa::graph::{generate, to_bipartite, validate, Generator};

fn main() -> deg2spa::Result<()> {
    for g in Generator::fixtures() {
        let ug = generate(&g)?;
        let b = to_bipartite(&ug);
        println!(
            "{g:<22} vertices {:>2}  edges {:>2}  bits {:>2}  checks {:>2}  applicable {}",
            ug.vertex_count(),
            ug.edge_count() / 2,
            b.bit_count(),
            b.check_count(),
            validate(&b).spa_theory_applicable
        );
    }

    let text = "vertices 3\n0 1\n0 1\n0 2\n2 1\n";
    let g = parse_ug(text)?;
    assert_eq!(write_ug(&g), text);
    println!("\nexample .ug:\n{text}\nsame graph as .bg:\n{}", write_bg(&to_bipartite(&g)));

    let tri = to_bipartite(&generate(&Generator::Complete(3))?);
    println!("triangle rejected: {:?}", validate(&tri).failures());
    Ok(())
}
