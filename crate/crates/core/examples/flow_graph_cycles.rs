//! Non-backtracking flow graph: strong connectivity, imprimitivity index,
//! cyclic classes and admissible cycle counts.
use deg2spa::graph::{enumerate_admissible_cycles, flow_graph, generate, Generator};

fn main() -> deg2spa::Result<()> {
    for g in [Generator::Complete(4), Generator::Petersen, Generator::Dipole(3), Generator::Fig5C, Generator::Fig3Tree] {
        let ug = generate(&g)?;
        let flow = flow_graph(&ug);
        print!("{g:<10} directed edges {:>2}  arcs {:>3}", ug.edge_count(), flow.arcs().len());
        if !flow.is_strongly_connected() {
            println!("  not strongly connected");
            continue;
        }
        let h = flow.imprimitivity_index()?;
        println!("  h {h}  class sizes {:?}", flow.cyclic_partition(h)?.sizes());
        let counts = enumerate_admissible_cycles(&ug, 8);
        let line: Vec<String> = counts.iter().map(|(len, n)| format!("{len}:{n}")).collect();
        println!("           cycles up to length 8 (up to rotation): {}", line.join(" "));
    }
    Ok(())
}
