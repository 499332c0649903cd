use deg2spa::decoder::{local_sum_run, LogDecoder};
use deg2spa::graph::{build_undirected, generate, to_bipartite, BipartiteGraph, Generator};
use deg2spa::rng::{log_uniform_odds, stream_rng};
use deg2spa::spectral::build_structural;
use deg2spa::trapping::{
    augment, classify, effective_input, effective_log_input, fixture_pendants, leaf_neutrality_gap, trapset_agreement, with_pendant_checks,
    CoreKind, TrapsetConfig,
};

fn base(g: Generator) -> BipartiteGraph {
    to_bipartite(&generate(&g).unwrap())
}

#[test]
fn fixture_trapping_sets_reduce_to_their_cores() {
    for (g, ab) in [(Generator::Ts53Girth8, (5, 3)), (Generator::Ts53Girth6, (5, 3)), (Generator::Ts62, (6, 2))] {
        let core = generate(&g).unwrap();
        let sub = with_pendant_checks(&core, &fixture_pendants(&g).unwrap()).unwrap();
        let info = classify(&sub);
        assert_eq!((info.a, info.b), ab, "{g}");
        assert_eq!(info.core_kind, CoreKind::SpaApplicable);
        assert_eq!(info.core.unwrap(), core);
    }
}

#[test]
fn classification_of_degenerate_cores() {
    let ring = generate(&Generator::Cycle(5)).unwrap();
    let info = classify(&with_pendant_checks(&ring, &[0, 2]).unwrap());
    assert_eq!((info.a, info.b, info.core_kind), (5, 2, CoreKind::Cycle));

    // a check of degree 3 has no degree-2 core
    let b = BipartiteGraph::new(3, 2, &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)]).unwrap();
    let info = classify(&b);
    assert_eq!((info.a, info.b), (3, 1));
    assert!(info.core.is_none());
    assert_eq!(info.core_kind, CoreKind::Other);

    let path = build_undirected(3, &[(0, 1), (1, 2)]).unwrap();
    let info = classify(&to_bipartite(&path));
    assert_eq!(info.core_kind, CoreKind::Other);
    assert!(!info.report.is_empty());
}

#[test]
fn augmented_flow_matrix_block_structure() {
    for g in Generator::trapping_cores() {
        let b = base(g);
        let aug = augment(&b).unwrap();
        let n = aug.core_bits();
        let ma = build_structural(&aug.augmented).unwrap();
        let mb = build_structural(&b).unwrap();
        let leaf: Vec<usize> = (0..n).map(|i| aug.leaf_edge(i)).collect();
        let ret: Vec<usize> = (0..n).map(|i| aug.return_edge(i)).collect();
        for &e in &leaf {
            assert!(ma.k_row(e).is_empty(), "{g}: row of leaf edge {e}");
        }
        for e in 0..ma.edge_count() {
            assert!(ma.k_row(e).iter().all(|f| !ret.contains(f)), "{g}: column of a return edge in row {e}");
        }
        // the core block is the core's own K
        let (ka, kb) = (ma.k(), mb.k());
        for e in 0..b.edge_count() {
            for f in 0..b.edge_count() {
                assert_eq!(ka[(aug.base_edge(e), aug.base_edge(f))], kb[(e, f)]);
            }
        }
        assert_eq!(aug.remove_augmentation(), b);
    }
}

/// Core edge messages of the augmented graph are `S_t(log u) + S_{t-1}(log u')`.
#[test]
fn leaf_inputs_arrive_one_iteration_late() {
    for g in Generator::trapping_cores() {
        let b = base(g);
        let aug = augment(&b).unwrap();
        let n = b.bit_count();
        let mut rng = stream_rng(11, 0, 0);
        let lu = log_uniform_odds(&mut rng, n, 10.0);
        let lup = log_uniform_odds(&mut rng, n, 10.0);
        let tr = LogDecoder::new(&aug.augmented).trajectory(&aug.inputs(&lu, &lup), 8).unwrap();
        for t in 1..=8 {
            let now = local_sum_run(&b, t).unwrap();
            let before = if t > 1 { Some(local_sum_run(&b, t - 1).unwrap()) } else { None };
            for e in 0..b.edge_count() {
                let expect = now.log_message(e, &lu) + before.as_ref().map_or(0.0, |a| a.log_message(e, &lup));
                let got = tr[t - 1].x[aug.base_edge(e)];
                assert!((got - expect).abs() <= 1e-9 * expect.abs().max(1.0), "{g} t={t} e={e}: {got} vs {expect}");
            }
        }
    }
}

#[test]
fn neutral_leaves_are_invisible() {
    for g in Generator::trapping_cores() {
        let aug = augment(&base(g)).unwrap();
        let n = aug.core_bits();
        for seed in 0..4 {
            let mut rng = stream_rng(seed, 5, 0);
            let lu = log_uniform_odds(&mut rng, n, 10.0);
            let lup = log_uniform_odds(&mut rng, n, 10.0);
            for i in 0..n {
                assert_eq!(leaf_neutrality_gap(&aug, &lu, &lup, i, 8).unwrap(), 0.0, "{g} leaf {i}");
            }
        }
    }
}

#[test]
fn effective_input_forms_agree() {
    let u = [0.5, 2.0, 3.0];
    let up = [1.5, 0.25, 1.0];
    let rho = 1.37;
    let odds = effective_input(&u, &up, rho);
    let logs = effective_log_input(&u.map(f64::ln), &up.map(f64::ln), rho);
    for (a, b) in odds.iter().zip(&logs) {
        assert!((a.ln() - b).abs() < 1e-12);
    }
}

/// The literal law holds on the primitive core; the lagged exponents and the
/// stopping-rule predictor hold on all three.
#[test]
fn agreement_rates() {
    for g in Generator::trapping_cores() {
        let b = base(g);
        let r = trapset_agreement(&b, &TrapsetConfig::new(b.bit_count(), 200, 3)).unwrap();
        assert!(r.lagged_agreement() >= 0.99, "{g}: {}", r.lagged_agreement());
        assert!(r.termination_agreement() >= 0.99, "{g}: {}", r.termination_agreement());
        if g == Generator::Ts53Girth6 {
            assert!(r.agreement() >= 0.99, "{}", r.agreement());
        }
    }
}

#[test]
fn agreement_rejects_bad_masks() {
    let b = base(Generator::Ts62);
    let mut cfg = TrapsetConfig::new(6, 5, 0);
    cfg.genuine.pop();
    assert!(trapset_agreement(&b, &cfg).is_err());
    assert!(augment(&to_bipartite(&generate(&Generator::Cycle(4)).unwrap())).is_err());
}
