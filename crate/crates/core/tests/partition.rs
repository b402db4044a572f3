mod common;

use common::weighted;
use expanders::generators::{gen_clique_chain, gen_dumbbell, gen_random_regular};
use expanders::graph::{Graph, VertexSet};
use expanders::partition::{
    claim_suite, partition_into_expanders, Action, AlgoConfig, PartitionError, VerifyMode,
};
use proptest::prelude::*;

fn chain_with_bridges(k: usize, size: usize, bridge: f64) -> Graph {
    let g = gen_clique_chain(k, size).unwrap();
    let edges: Vec<_> = g
        .edges()
        .into_iter()
        .map(|(u, v, w)| if u / size == v / size { (u, v, w) } else { (u, v, bridge) })
        .collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

#[test]
fn light_bridge_splits_the_dumbbell() {
    let g = gen_dumbbell(6, 1e-4).unwrap();
    let cfg = AlgoConfig::new(3);
    let (state, report) = partition_into_expanders(&g, &cfg).unwrap();
    assert_eq!(state.ell(), 2);
    let mut parts = state.parts.clone();
    parts.sort();
    assert_eq!(parts, vec![(0..6).collect::<VertexSet>(), (6..12).collect()]);
    let tags: Vec<_> = report.trace.iter().map(|e| e.action.tag()).collect();
    assert_eq!(tags, ["split-core-B", "stop"]);
    assert!(report.verification.passed);
    assert_eq!(report.verification.mode, VerifyMode::Auto);
    claim_suite(&g, &cfg, &report.trace).unwrap();
}

#[test]
fn unit_bridge_keeps_the_dumbbell_whole() {
    // the sweep cut 1/31 is far above λ₃/(140·9)
    let g = gen_dumbbell(6, 1.0).unwrap();
    let (state, report) = partition_into_expanders(&g, &AlgoConfig::new(3)).unwrap();
    assert_eq!(state.ell(), 1);
    assert!(report.thresholds.phi_in < 1.0 / 31.0);
}

#[test]
fn light_chain_separates_every_clique() {
    let g = chain_with_bridges(3, 6, 1e-5);
    let cfg = AlgoConfig::new(5);
    let (state, report) = partition_into_expanders(&g, &cfg).unwrap();
    assert_eq!(state.ell(), 4);
    let mut parts = state.parts.clone();
    parts.sort();
    let cliques: Vec<VertexSet> = (0..4).map(|c| (6 * c..6 * c + 6).collect()).collect();
    assert_eq!(parts, cliques);
    assert_eq!(report.iterations, 3);
    let claims = claim_suite(&g, &cfg, &report.trace).unwrap();
    assert!(claims.completed);
}

#[test]
fn runs_are_deterministic() {
    let g = chain_with_bridges(3, 6, 1e-5);
    let cfg = AlgoConfig::new(5);
    let (_, a) = partition_into_expanders(&g, &cfg).unwrap();
    let (_, b) = partition_into_expanders(&g, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn iteration_cap_returns_the_partial_run() {
    let g = chain_with_bridges(3, 6, 1e-5);
    let cfg = AlgoConfig {
        max_iterations: Some(1),
        ..AlgoConfig::new(5)
    };
    match partition_into_expanders(&g, &cfg) {
        Err(PartitionError::CapExceeded { cap, partial }) => {
            assert_eq!(cap, 1);
            assert_eq!(partial.iterations, 1);
            assert_eq!(partial.state.ell(), 2);
            assert!(matches!(partial.trace[0].action, Action::SplitCoreB { .. }));
            // claims hold up to the truncation
            let claims = claim_suite(&g, &cfg, &partial.trace).unwrap();
            assert!(!claims.completed);
        }
        other => panic!("expected a cap error, got {other:?}"),
    }
}

#[test]
fn disconnected_graph_fails_the_precondition() {
    let g = Graph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
    assert!(matches!(
        partition_into_expanders(&g, &AlgoConfig::new(2)),
        Err(PartitionError::LambdaTooSmall { k: 2, .. })
    ));
}

#[test]
fn regular_expander_stays_whole() {
    let g = gen_random_regular(32, 4, 1).unwrap();
    let (state, report) = partition_into_expanders(&g, &AlgoConfig::new(2)).unwrap();
    assert_eq!(state.ell(), 1);
    assert_eq!(report.iterations, 0);
    assert!(report.verification.passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_run_satisfies_its_claims(g in weighted(4..=12), k in 2usize..=4) {
        prop_assume!(k <= g.n());
        let cfg = AlgoConfig::new(k);
        match partition_into_expanders(&g, &cfg) {
            Ok((state, report)) => {
                prop_assert!(state.ell() < k);
                prop_assert!(state.validate(g.n()).is_ok());
                prop_assert!(report.verification.passed);
                let claims = claim_suite(&g, &cfg, &report.trace).unwrap();
                prop_assert!(claims.completed);
                prop_assert_eq!(claims.final_state, state);
            }
            Err(PartitionError::LambdaTooSmall { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn clustered_runs_satisfy_their_claims(
        sizes in prop::collection::vec(3usize..=6, 2..=4),
        links in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), 1e-6f64..1e-2), 1..8),
        drop in prop::collection::vec(prop::bool::weighted(0.25), 64),
    ) {
        // dense blocks in a row joined by light links
        let n: usize = sizes.iter().sum();
        let mut block = Vec::new();
        for (b, &s) in sizes.iter().enumerate() {
            block.extend(std::iter::repeat_n(b, s));
        }
        let mut edges = std::collections::BTreeMap::new();
        let mut idx = 0;
        for u in 0..n {
            for v in u + 1..n {
                if block[u] == block[v] && (v == u + 1 || !drop[idx % drop.len()]) {
                    edges.insert((u, v), 1.0);
                }
                idx += 1;
            }
        }
        for (a, b, w) in links {
            let (u, v) = (a.index(n), b.index(n));
            if block[u] != block[v] {
                edges.insert((u.min(v), u.max(v)), w);
            }
        }
        let list: Vec<_> = edges.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let g = Graph::from_edges(n, &list).unwrap();
        let k = sizes.len() + 1;
        let cfg = AlgoConfig::new(k);
        match partition_into_expanders(&g, &cfg) {
            Ok((state, report)) => {
                prop_assert!(state.ell() < k);
                prop_assert!(report.verification.passed);
                let claims = claim_suite(&g, &cfg, &report.trace).unwrap();
                prop_assert!(claims.completed);
            }
            Err(PartitionError::LambdaTooSmall { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
