//! Trapping-set cores, virtual-bit augmentation and the effective-input law.
use deg2spa::graph::{generate, to_bipartite, Generator};
use deg2spa::trapping::{classify, fixture_pendants, trapset_agreement, with_pendant_checks, TrapsetConfig};

fn main() -> deg2spa::Result<()> {
    for g in Generator::trapping_cores() {
        let core = generate(&g)?;
        let pendants = fixture_pendants(&g).expect("fixture has pendant checks");
        let info = classify(&with_pendant_checks(&core, &pendants)?);
        let b = to_bipartite(&core);
        let r = trapset_agreement(&b, &TrapsetConfig::new(b.bit_count(), 200, 3))?;
        println!(
            "{g:<12} ({},{}) core {:?}: effective input {:.3}, lagged {:.3}, stopping rule {:.3}",
            info.a,
            info.b,
            info.core_kind,
            r.agreement(),
            r.lagged_agreement(),
            r.termination_agreement()
        );
    }
    Ok(())
}
