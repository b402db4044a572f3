mod common;

use common::{weighted, with_subset};
use expanders::generators::gen_complete;
use expanders::graph::{Graph, VertexSet};
use expanders::io::{parse_edge_list, write_edge_list};
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn degrees_are_symmetric_sums(g in weighted(2..=12)) {
        let mut deg = vec![0.0; g.n()];
        for (u, v, w) in g.edges() {
            prop_assert!(u < v);
            prop_assert_eq!(g.weight(v, u), w);
            deg[u] += w;
            deg[v] += w;
        }
        for (v, &d) in deg.iter().enumerate() {
            prop_assert!(close(d, g.degree(v)));
            prop_assert!(g.degree(v) > 0.0);
        }
        prop_assert!(close(deg.iter().sum::<f64>(), g.total_volume()));
    }

    #[test]
    fn volume_and_boundary_split((g, s) in with_subset(weighted(2..=12))) {
        let rest = s.complement(g.n());
        prop_assert!(close(g.volume(&s).unwrap() + g.volume(&rest).unwrap(), g.total_volume()));
        prop_assert!(close(g.boundary(&s).unwrap(), g.boundary(&rest).unwrap()));
        prop_assert!(close(g.cut_weight(&s, &rest).unwrap(), g.cut_weight(&rest, &s).unwrap()));
        // e(S, V) counts only edges that leave S
        prop_assert!(close(g.cut_weight(&s, &g.vertices()).unwrap(), g.boundary(&s).unwrap()));
        let phi = g.conductance(&s).unwrap();
        // boundary and volume sum the same weights in different orders
        prop_assert!((0.0..=1.0 + 1e-12).contains(&phi), "{}", phi);
    }

    #[test]
    fn conductance_is_scale_free((g, s) in with_subset(weighted(2..=10)), c in 0.1f64..50.0) {
        let scaled: Vec<_> = g.edges().into_iter().map(|(u, v, w)| (u, v, w * c)).collect();
        let h = Graph::from_edges(g.n(), &scaled).unwrap();
        prop_assert!(close(g.conductance(&s).unwrap(), h.conductance(&s).unwrap()));
    }

    #[test]
    fn relabelling_preserves_quantities(
        (g, s) in with_subset(weighted(2..=10)),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // a seeded rotation-and-reflection keeps the strategy simple
        let shift = (seed % n as u64) as usize;
        for (v, p) in perm.iter_mut().enumerate() {
            *p = if seed % 2 == 0 { (v + shift) % n } else { (n - 1 - v + shift) % n };
        }
        let h = g.permuted(&perm).unwrap();
        let t: VertexSet = s.iter().map(|v| perm[v]).collect();
        prop_assert!(close(g.conductance(&s).unwrap(), h.conductance(&t).unwrap()));
        prop_assert!(close(g.volume(&s).unwrap(), h.volume(&t).unwrap()));
    }

    #[test]
    fn induced_subgraph_keeps_inner_edges((g, s) in with_subset(weighted(3..=10))) {
        let sub = g.induced_subgraph(&s).unwrap();
        let inner: f64 = g
            .edges()
            .into_iter()
            .filter(|&(u, v, _)| s.contains(u) && s.contains(v))
            .map(|(_, _, w)| w)
            .sum();
        prop_assert!(close(sub.graph.total_volume(), 2.0 * inner));
        prop_assert_eq!(sub.to_parent_set(&sub.graph.vertices()), s.clone());
        prop_assert!(close(
            g.volume(&s).unwrap() - g.boundary(&s).unwrap(),
            sub.graph.total_volume(),
        ));
    }

    #[test]
    fn edge_list_round_trip(g in weighted(2..=14)) {
        let text = write_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(write_edge_list(&back), text);
    }

    #[test]
    fn varphi_matches_its_formula(
        (g, s) in with_subset(weighted(3..=10)),
        extra in prop::collection::vec(any::<bool>(), 10),
    ) {
        // B = S plus a random slice of the rest, kept a strict superset
        let rest = s.complement(g.n());
        let added: VertexSet = rest.iter().filter(|&v| extra[v % extra.len()]).collect();
        let b = s.union(&added);
        prop_assume!(b.len() > s.len());
        let inside = g.cut_weight(&s, &b).unwrap();
        let outside = g.cut_weight(&s, &b.complement(g.n())).unwrap();
        let share = g.volume(&b.difference(&s)).unwrap() / g.volume(&b).unwrap();
        match g.varphi(&s, &b) {
            Ok(x) if outside > 0.0 => prop_assert!(close(x, inside / (share * outside))),
            Ok(x) => prop_assert!(x.is_infinite() && inside > 0.0),
            Err(_) => prop_assert!(inside == 0.0 && outside == 0.0),
        }
    }
}

#[test]
fn complete_graph_conductance_closed_form() {
    // φ(S) in K_n is (n − |S|)/(n − 1)
    let g = gen_complete(9).unwrap();
    for size in 1..9 {
        let s: VertexSet = (0..size).collect();
        assert!(close(g.conductance(&s).unwrap(), (9 - size) as f64 / 8.0));
    }
}
