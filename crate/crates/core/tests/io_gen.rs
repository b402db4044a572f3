use expanders::generators::{
    gen_clique_chain, gen_complete, gen_cycle, gen_dumbbell, gen_path, gen_planted, gen_random_regular, gen_star,
    GenSpec,
};
use expanders::io::{parse_edge_list, write_edge_list};
use expanders::oracles::rho_exact;
use expanders::spectral::spectral_bisect;
use proptest::prelude::*;

#[test]
fn planted_seed_seven_is_recovered_by_the_sweep() {
    let p = gen_planted(2, 16, 0.8, 0.02, 7).unwrap();
    assert!(p.graph.is_connected());
    let cut = spectral_bisect(&p.graph, 1e-10).unwrap();
    let labels: Vec<usize> = (0..32).map(|v| usize::from(cut.set.contains(v))).collect();
    let agree = labels.iter().zip(&p.labels).filter(|(a, b)| a == b).count();
    assert!(agree == 32 || agree == 0, "sweep disagrees with the blocks on {} vertices", agree.min(32 - agree));
}

#[test]
fn outer_clique_of_the_chain_is_the_order_three_bottleneck() {
    let g = gen_clique_chain(3, 4).unwrap();
    let r = rho_exact(&g, 3).unwrap();
    assert_eq!(r.value, 1.0 / 13.0);
}

#[test]
fn generated_graphs_survive_the_text_format() {
    for spec in ["star:7", "cycle:9", "clique_chain:2,5", "dumbbell:4,bridge=0.001", "planted:2,6,0.9,0.2,seed=3", "figure1"] {
        let g = spec.parse::<GenSpec>().unwrap().generate().unwrap().graph;
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(back.edges(), g.edges(), "{spec}");
    }
}

proptest! {
    #[test]
    fn family_counts(n in 3usize..40, k in 1usize..6, size in 2usize..8) {
        let star = gen_star(n).unwrap();
        prop_assert_eq!((star.n(), star.edge_count()), (n + 1, n));
        let cycle = gen_cycle(n).unwrap();
        prop_assert_eq!((cycle.n(), cycle.edge_count()), (n, n));
        let path = gen_path(n).unwrap();
        prop_assert_eq!((path.n(), path.edge_count()), (n, n - 1));
        let complete = gen_complete(n).unwrap();
        prop_assert_eq!(complete.edge_count(), n * (n - 1) / 2);
        let chain = gen_clique_chain(k, size).unwrap();
        prop_assert_eq!(chain.n(), (k + 1) * size);
        prop_assert_eq!(chain.edge_count(), (k + 1) * size * (size - 1) / 2 + k);
        prop_assert!(chain.is_connected());
        let bell = gen_dumbbell(size, 1.0).unwrap();
        prop_assert_eq!(bell.edge_count(), size * (size - 1) + 1);
    }

    #[test]
    fn random_families_are_seed_deterministic(seed in any::<u64>(), n in 6usize..20) {
        let a = gen_random_regular(2 * n, 3, seed).unwrap();
        let b = gen_random_regular(2 * n, 3, seed).unwrap();
        prop_assert_eq!(a.edges(), b.edges());
        prop_assert!(a.degrees().iter().all(|&d| d == 3.0));
        let p = gen_planted(2, n, 0.6, 0.1, seed).unwrap();
        let q = gen_planted(2, n, 0.6, 0.1, seed).unwrap();
        prop_assert_eq!(p.graph.edges(), q.graph.edges());
        prop_assert!(p.graph.isolated_vertices().is_empty());
    }

    #[test]
    fn spec_display_round_trips(parts in 1usize..4, size in 2usize..9, p in 0.0f64..1.0, seed in any::<u64>()) {
        let spec = GenSpec::Planted { parts, size, p_in: p, p_out: p / 2.0, seed };
        prop_assert_eq!(spec.to_string().parse::<GenSpec>().unwrap(), spec);
    }
}
