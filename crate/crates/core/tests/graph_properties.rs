use deg2spa::graph::io::{parse_bg, parse_ug, write_bg, write_ug};
use deg2spa::graph::{
    build_undirected, enumerate_admissible_cycles, flow_graph, generate, to_bipartite, to_undirected, validate, Generator, UndirectedGraph,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = UndirectedGraph> {
    (2usize..=6).prop_flat_map(|n| prop::collection::vec((0..n, 0..n), 1..=9).prop_map(move |pairs| build_undirected(n, &pairs).unwrap()))
}

/// Connected, minimum degree 2 and not a cycle: a spanning cycle plus chords.
fn arb_core_graph() -> impl Strategy<Value = UndirectedGraph> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..=5).prop_map(move |extra| {
            let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            pairs.extend(extra);
            build_undirected(n, &pairs).unwrap()
        })
    })
}

/// Arc `e -> f` iff `f` leaves the vertex `e` enters and does not reverse it.
fn arc_oracle(g: &UndirectedGraph, e: usize, f: usize) -> bool {
    g.terminus(e) == g.source(f) && f != g.conj(e)
}

/// `trace(A^len)` for the oracle adjacency, in exact integers.
fn closed_walks(g: &UndirectedGraph, len: usize) -> BigUint {
    let n = g.edge_count();
    let mut total = BigUint::from(0u32);
    for start in 0..n {
        let mut v = vec![BigUint::from(0u32); n];
        v[start] = BigUint::from(1u32);
        for _ in 0..len {
            let mut w = vec![BigUint::from(0u32); n];
            for (e, ve) in v.iter().enumerate() {
                if *ve != BigUint::from(0u32) {
                    for (f, wf) in w.iter_mut().enumerate() {
                        if arc_oracle(g, e, f) {
                            *wf += ve;
                        }
                    }
                }
            }
            v = w;
        }
        total += &v[start];
    }
    total
}

fn totient(n: usize) -> usize {
    (1..=n).filter(|&k| gcd(k, n) == 1).count()
}

/// Closed walks up to rotation: `(1/n) sum_{d | n} phi(n/d) trace(A^d)`.
fn cyclic_classes(g: &UndirectedGraph, len: usize) -> BigUint {
    let total: BigUint = (1..=len).filter(|&d| len.is_multiple_of(d)).map(|d| closed_walks(g, d) * BigUint::from(totient(len / d))).sum();
    total / BigUint::from(len)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn conjugation_is_a_reversing_involution(g in arb_graph()) {
        for e in 0..g.edge_count() {
            let c = g.conj(e);
            prop_assert_ne!(c, e);
            prop_assert_eq!(g.conj(c), e);
            prop_assert_eq!(g.source(c), g.terminus(e));
            prop_assert_eq!(g.terminus(c), g.source(e));
        }
        prop_assert_eq!(g.edge_count() % 2, 0);
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), g.edge_count());
    }

    #[test]
    fn flow_arcs_match_definition(g in arb_graph()) {
        let flow = flow_graph(&g);
        let n = g.edge_count();
        let mut arcs = 0;
        for e in 0..n {
            for f in 0..n {
                prop_assert_eq!(flow.has_arc(e, f), arc_oracle(&g, e, f), "arc {} -> {}", e, f);
                arcs += usize::from(arc_oracle(&g, e, f));
            }
            prop_assert_eq!(flow.out_degree(e), g.degree(g.terminus(e)) - 1);
            prop_assert_eq!(flow.in_degree(e), g.degree(g.source(e)) - 1);
        }
        prop_assert_eq!(flow.arcs().len(), arcs);
    }

    #[test]
    fn admissible_cycles_equal_flow_traces(g in arb_graph()) {
        let dp = enumerate_admissible_cycles(&g, 6);
        let dfs = flow_graph(&g).cycle_lengths(6);
        for len in 1..=6 {
            let oracle = cyclic_classes(&g, len);
            prop_assert_eq!(dp.count(len), oracle.clone(), "length {}", len);
            prop_assert_eq!(dfs.count(len), oracle);
        }
    }

    #[test]
    fn cyclic_partition_is_consistent(g in arb_core_graph()) {
        let flow = flow_graph(&g);
        prop_assert!(flow.is_strongly_connected());
        let h = flow.imprimitivity_index().unwrap();
        let part = flow.cyclic_partition(h).unwrap();
        prop_assert_eq!(part.sizes().iter().sum::<usize>(), g.edge_count());
        for &(e, f) in flow.arcs() {
            prop_assert_eq!(part.class_of(f), (part.class_of(e) + 1) % h);
        }
        let lengths = enumerate_admissible_cycles(&g, 2 * g.edge_count());
        let g_len = lengths.lengths().into_iter().fold(0, gcd);
        prop_assert_eq!(g_len, h);
    }

    #[test]
    fn bipartite_round_trip_keeps_edge_ids(g in arb_graph()) {
        let b = to_bipartite(&g);
        prop_assert_eq!(b.edge_count(), g.edge_count());
        prop_assert!(b.all_checks_degree2());
        for e in 0..g.edge_count() {
            prop_assert_eq!(b.bit_of(e), g.source(e));
        }
        prop_assert_eq!(to_undirected(&b).unwrap(), g);
    }

    #[test]
    fn text_formats_round_trip(g in arb_graph()) {
        prop_assert_eq!(parse_ug(&write_ug(&g)).unwrap(), g.clone());
        let b = to_bipartite(&g);
        prop_assert_eq!(parse_bg(&write_bg(&b)).unwrap(), b);
    }

    #[test]
    fn relabelling_edges_preserves_cycle_counts(g in arb_graph(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let p = g.permute_edges(&order).unwrap();
        prop_assert_eq!(enumerate_admissible_cycles(&p, 6), enumerate_admissible_cycles(&g, 6));
    }
}

fn girth(g: &UndirectedGraph) -> Option<usize> {
    enumerate_admissible_cycles(g, 12).lengths().into_iter().min()
}

#[test]
fn named_fixture_shapes() {
    let p = generate(&Generator::Petersen).unwrap();
    assert_eq!((p.vertex_count(), p.edge_count() / 2), (10, 15));
    assert!(p.degrees().iter().all(|&d| d == 3));
    assert_eq!(girth(&p), Some(5));

    let k4 = generate(&Generator::Complete(4)).unwrap();
    assert_eq!(girth(&k4), Some(3));

    let g4 = generate(&Generator::Cover3Girth4).unwrap();
    assert!(g4.degrees().iter().all(|&d| d == 3));
    assert_eq!(girth(&g4), Some(4));
    assert_eq!(girth(&generate(&Generator::Cover3Two2Cycles).unwrap()), Some(2));
    assert_eq!(girth(&generate(&Generator::Cover3Three2Cycles).unwrap()), Some(2));

    for (gen, bip_girth) in [(Generator::Ts53Girth8, 8), (Generator::Ts53Girth6, 6)] {
        let g = generate(&gen).unwrap();
        let mut d = g.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(d, vec![3, 3, 2, 2, 2]);
        assert_eq!(girth(&g).map(|x| 2 * x), Some(bip_girth));
    }
    let ts62 = generate(&Generator::Ts62).unwrap();
    assert_eq!((ts62.vertex_count(), ts62.edge_count() / 2), (6, 7));
}

#[test]
fn validation_flags() {
    let tri = to_bipartite(&generate(&Generator::Complete(3)).unwrap());
    let v = validate(&tri);
    assert!(!v.spa_theory_applicable);
    assert_eq!(v.failures(), vec!["no bit of degree ≥ 3".to_string()]);
    let tree = to_bipartite(&generate(&Generator::Fig3Tree).unwrap());
    assert!(!validate(&tree).spa_theory_applicable);
    for g in Generator::fixtures() {
        assert!(validate(&to_bipartite(&generate(&g).unwrap())).spa_theory_applicable, "{g}");
    }
}

#[test]
fn strong_connectivity_of_small_flow_graphs() {
    let tree = generate(&Generator::Fig3Tree).unwrap();
    let f = flow_graph(&tree);
    assert!(!f.is_strongly_connected());
    assert_eq!(f.shadow_component_count(), 1);
    // edge 1 -> 3 has no predecessor: it leaves a leaf
    assert_eq!(f.in_degree(0), 0);

    let tri = flow_graph(&generate(&Generator::Complete(3)).unwrap());
    assert!(!tri.is_strongly_connected());
    assert_eq!(tri.shadow_component_count(), 2);

    // two triangles joined by a bridge: walks can cross and come back
    let g = build_undirected(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]).unwrap();
    assert!(flow_graph(&g).is_strongly_connected());
}
