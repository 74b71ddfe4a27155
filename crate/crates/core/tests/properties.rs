mod common;

use cc_contract::algorithms::{
    functional_wcc_dht, local_contraction_labels, tree_functional_graph, AlgoConfig, AlgoError,
    Algorithm,
};
use cc_contract::contraction::{contract_by_labels, prune_isolated, PriorityMap};
use cc_contract::generators::{generate, gnp, GenSpec};
use cc_contract::graph::Graph;
use cc_contract::mpc::{CostModel, DhtHandle};
use proptest::prelude::*;

use common::*;

fn no_finalize(seed: u64) -> AlgoConfig {
    AlgoConfig {
        finalize_threshold: 0,
        ..AlgoConfig::with_seed(seed)
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n as u64, 0..n as u64), 0..3 * n)
            .prop_map(move |e| Graph::from_edges(n, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_algorithm_matches_bfs(g in arb_graph(60), seed in any::<u64>()) {
        let expected = bfs_labels(&g);
        for algo in Algorithm::ALL {
            let r = algo.run(&g, &no_finalize(seed)).unwrap();
            prop_assert_eq!(r.assignment.labels(), expected.as_slice(), "{}", algo);
        }
    }

    #[test]
    fn local_labels_stay_within_two_hops(g in arb_graph(50), seed in any::<u64>()) {
        let rho = PriorityMap::sample(seed, 0, g.n());
        let l = local_contraction_labels(&g, &rho);
        for v in g.vertices() {
            let t = l.get(v);
            let ok = t == v
                || g.neighbors(v).contains(&t)
                || g.neighbors(v).iter().any(|&u| g.neighbors(u).contains(&t));
            prop_assert!(ok);
            // The label is the minimum over the closed two-hop ball.
            prop_assert!(!rho.precedes(v, t) || v == t);
        }
    }

    #[test]
    fn local_contraction_is_monotone_in_priority(g in arb_graph(50), seed in any::<u64>()) {
        // Every label is the ball minimum, so no vertex in the ball of v
        // precedes its label.
        let rho = PriorityMap::sample(seed, 0, g.n());
        let l = local_contraction_labels(&g, &rho);
        for v in g.vertices() {
            let t = l.get(v);
            let mut ball = vec![v];
            for &u in g.neighbors(v) {
                ball.push(u);
                ball.extend_from_slice(g.neighbors(u));
            }
            prop_assert!(ball.iter().all(|&x| x == t || rho.precedes(t, x)));
        }
    }

    #[test]
    fn chases_settle(g in arb_graph(80), seed in any::<u64>()) {
        let rho = PriorityMap::sample(seed, 0, g.n());
        let f = tree_functional_graph(&g, &rho);
        for v in g.vertices() {
            match f.chase(v) {
                Some((_, a, b)) => prop_assert_eq!(f.get(b), Some(a)),
                None => prop_assert_eq!(g.degree(v), 0),
            }
        }
    }

    #[test]
    fn runs_are_deterministic(g in arb_graph(40), seed in any::<u64>()) {
        for algo in Algorithm::ALL {
            let a = algo.run(&g, &no_finalize(seed)).unwrap();
            let b = algo.run(&g, &no_finalize(seed)).unwrap();
            prop_assert_eq!(&a.phases, &b.phases);
            prop_assert_eq!(a.ledger.entries(), b.ledger.entries());
            prop_assert_eq!(a.assignment, b.assignment);
        }
    }

    #[test]
    fn contracted_edges_never_grow(g in arb_graph(60), seed in any::<u64>()) {
        let rho = PriorityMap::sample(seed, 0, g.n());
        let o = contract_by_labels(&g, &local_contraction_labels(&g, &rho)).unwrap();
        prop_assert!(o.contracted.m() <= g.m());
        prop_assert!(o.contracted.n() <= g.n());
    }
}

#[test]
fn prune_counts_isolated_vertices() {
    let g = gnp(1000, 0.5 / 1000.0, 11).unwrap();
    let p = prune_isolated(&g);
    let isolated = g.vertices().filter(|&v| g.degree(v) == 0).count();
    assert_eq!(p.finalized.len(), isolated);
    assert_eq!(p.survivors() + isolated, 1000);
    assert_eq!(p.graph.m(), g.m());
    // Expected isolated fraction is about e^{-0.5}.
    assert!((isolated as f64 / 1000.0 - (-0.5f64).exp()).abs() < 0.06);
}

#[test]
fn gnp_edge_count_is_near_expectation() {
    let n = 20_000usize;
    let p = 10.0 / n as f64;
    let g = gnp(n, p, 5).unwrap();
    let expected = p * (n * (n - 1) / 2) as f64;
    assert!((g.m() as f64 - expected).abs() < 0.05 * expected, "{}", g.m());
    g.check_invariants().unwrap();
}

#[test]
fn gnp_dense_is_connected() {
    let n = 2000;
    let g = gnp(n, 3.0 * (n as f64).ln() / n as f64, 1).unwrap();
    assert!(bfs_labels(&g).iter().all(|&l| l == 0));
}

#[test]
fn gnp_pair_marginals() {
    let (n, p, seeds) = (30usize, 0.2, 2000u64);
    let mut counts = vec![0u32; n * n];
    for s in 0..seeds {
        let g = gnp(n, p, s).unwrap();
        for e in g.edges() {
            counts[e.u as usize * n + e.v as usize] += 1;
        }
    }
    let sd = (seeds as f64 * p * (1.0 - p)).sqrt();
    let mean = seeds as f64 * p;
    for i in 0..n {
        for j in i + 1..n {
            let c = counts[i * n + j] as f64;
            assert!((c - mean).abs() <= 4.0 * sd, "pair ({i},{j}): {c}");
        }
    }
}

#[test]
fn generate_is_seed_deterministic() {
    let a = generate(&GenSpec::gnp(3000, 0.002, 9)).unwrap();
    let b = generate(&GenSpec::gnp(3000, 0.002, 9)).unwrap();
    let c = generate(&GenSpec::gnp(3000, 0.002, 10)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn local_contraction_shrinks_path_by_at_most_five() {
    // A label reaches two hops, so a group spans at most five path vertices.
    for seed in 0..10 {
        let r = Algorithm::Local.run(&path(3000), &no_finalize(seed)).unwrap();
        for w in r.phases.windows(2) {
            assert!(5 * w[1].nodes_in >= w[0].nodes_in, "{:?}", r.phases);
        }
    }
}

#[test]
fn doubling_algorithms_need_log_phases_on_paths() {
    for k in [4u32, 6, 8, 10] {
        let g = path(1 << k);
        for seed in 0..3 {
            for algo in [Algorithm::HashToMin, Algorithm::Cracker] {
                // Hash-to-Min sets grow quadratically on an ordered path.
                let cfg = AlgoConfig {
                    message_cap_per_edge: 1 << 20,
                    ..no_finalize(seed)
                };
                let r = algo.run(&g, &cfg).unwrap();
                let count = match algo {
                    Algorithm::Cracker => r.rounds() as usize,
                    _ => r.phase_count(),
                };
                assert!(count >= k as usize, "{algo} k={k} got {count}");
            }
        }
    }
}

#[test]
fn hash_to_min_hits_message_cap_on_long_paths() {
    let r = Algorithm::HashToMin.run(&path(1024), &no_finalize(0));
    assert!(matches!(r, Err(AlgoError::MessageCap { .. })), "{r:?}");
}

#[test]
fn merge_to_large_clusters_stay_connected() {
    for seed in 0..5 {
        let n = 3000;
        let g = gnp(n, 8.0 * (n as f64).ln() / n as f64, seed).unwrap();
        let r = Algorithm::LocalMtl.run(&g, &no_finalize(seed)).unwrap();
        assert_eq!(r.assignment.labels(), bfs_labels(&g).as_slice());
        assert!(r.diagnostics.iter().any(|d| d.alpha.is_some()));
    }
}

#[test]
fn tree_phases_are_logarithmic() {
    for (name, g) in structured_suite(10_000) {
        let r = Algorithm::TreePj.run(&g, &no_finalize(1)).unwrap();
        let bound = (g.n().max(2) as f64).log2().ceil() as usize + 1;
        assert!(r.phase_count() <= bound, "{name}: {}", r.phase_count());
    }
}

#[test]
fn dht_gets_are_bounded_on_paths() {
    let g = path(1024);
    let limit = 1024 * 6 * 10;
    for seed in 0..50 {
        let rho = PriorityMap::sample(seed, 0, g.n());
        let f = tree_functional_graph(&g, &rho);
        let mut dht = DhtHandle::new();
        let rep = functional_wcc_dht(&f, &rho, &mut dht).unwrap();
        assert!(rep.gets <= limit, "seed {seed}: {}", rep.gets);
        assert_eq!(rep.gets, rep.depths.iter().map(|d| d + 2).sum::<u64>());
    }
}

#[test]
fn local_contraction_phase_count_on_sparse_random_graph() {
    let n = 100_000;
    let g = gnp(n, 3.0 * (n as f64).ln() / n as f64, 2).unwrap();
    let r = Algorithm::Local.run(&g, &no_finalize(2)).unwrap();
    assert!(r.phase_count() <= 7, "{}", r.phase_count());
}

#[test]
fn strict_space_rejects_only_hash_to_min_on_a_star() {
    let g = family(cc_contract::generators::Family::Star, 2000);
    for algo in Algorithm::ALL {
        let mut cfg = no_finalize(3);
        cfg.cost = CostModel::strict(8, g.n(), g.m());
        let r = algo.run(&g, &cfg);
        match algo {
            Algorithm::HashToMin => {
                assert!(matches!(r, Err(AlgoError::Budget { .. })), "{r:?}")
            }
            // Hash-Min floods one label per vertex, within budget.
            _ => assert!(r.is_ok(), "{algo}: {:?}", r.err()),
        }
    }
}
