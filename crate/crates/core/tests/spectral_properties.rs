mod common;

use common::{class, indicator, labelling, unweighted, weighted, with_subset};
use expanders::graph::Graph;
use expanders::oracles::min_conductance_exact;
use expanders::spectral::{
    eigenpairs, eigenpairs_with, laplacian_apply, rayleigh_quotient, spectral_bisect, sweep_cut,
    EigenOptions, Method,
};
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn with_method(method: Method) -> EigenOptions {
    EigenOptions {
        method,
        ..EigenOptions::with_tol(TOL)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn spectrum_is_sorted_in_range(g in weighted(2..=16)) {
        let k = g.n().min(5);
        let r = eigenpairs(&g, k, TOL).unwrap();
        prop_assert!(r.eigenvalues[0].abs() < 1e-8);
        for w in r.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12);
        }
        for (l, res) in r.eigenvalues.iter().zip(&r.residuals) {
            prop_assert!((-1e-9..=2.0 + 1e-9).contains(l));
            prop_assert!(*res <= TOL);
        }
        for f in &r.eigenvectors {
            let norm: f64 = f.iter().map(|x| x * x).sum();
            prop_assert!((norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_and_iterative_agree(g in weighted(3..=20)) {
        let k = g.n().min(4);
        let a = eigenpairs_with(&g, k, &with_method(Method::Dense)).unwrap();
        let b = eigenpairs_with(&g, k, &with_method(Method::Iterative)).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-8, "{:?} vs {:?}", a.eigenvalues, b.eigenvalues);
        }
    }

    #[test]
    fn cheeger_sandwich(g in unweighted(2..=12)) {
        let lambda2 = eigenpairs(&g, 2, TOL).unwrap().eigenvalues[1];
        let (_, phi) = min_conductance_exact(&g).unwrap();
        prop_assert!(lambda2 / 2.0 <= phi + 1e-8);
        prop_assert!(phi <= (2.0 * lambda2).sqrt() + 1e-8);
    }

    #[test]
    fn sweep_is_no_worse_than_cheeger(g in weighted(2..=14)) {
        let b = spectral_bisect(&g, TOL).unwrap();
        prop_assert!(2.0 * g.volume(&b.set).unwrap() <= g.total_volume() + 1e-9);
        prop_assert!(b.conductance <= (2.0 * b.lambda2).sqrt() + 1e-8);
        let (_, phi) = min_conductance_exact(&g).unwrap();
        prop_assert!(b.conductance >= phi - 1e-12);
    }

    #[test]
    fn indicator_quotient_is_conductance((g, s) in with_subset(weighted(2..=14))) {
        let r = rayleigh_quotient(&g, &indicator(g.n(), &s)).unwrap();
        let phi = g.conductance(&s).unwrap();
        prop_assert!((r - phi).abs() <= 1e-12 * phi.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn disjoint_supports_bound_lambda_k(
        (g, labels, k) in weighted(4..=12).prop_flat_map(|g| {
            let n = g.n();
            (2..=n.min(5)).prop_flat_map(move |k| (Just(g.clone()), labelling(n, k), Just(k)))
        })
    ) {
        let lambda = eigenpairs(&g, k, TOL).unwrap().eigenvalues[k - 1];
        let worst = (0..k)
            .map(|i| rayleigh_quotient(&g, &indicator(g.n(), &class(&labels, i))).unwrap())
            .fold(0.0, f64::max);
        prop_assert!(lambda <= 2.0 * worst + 1e-8);
    }

    #[test]
    fn laplacian_is_self_adjoint(
        g in weighted(2..=12),
        f in prop::collection::vec(-1.0f64..1.0, 12),
        h in prop::collection::vec(-1.0f64..1.0, 12),
    ) {
        let n = g.n();
        let (f, h) = (&f[..n], &h[..n]);
        let lf = laplacian_apply(&g, f).unwrap();
        let lh = laplacian_apply(&g, h).unwrap();
        let a: f64 = lf.iter().zip(h).map(|(x, y)| x * y).sum();
        let b: f64 = lh.iter().zip(f).map(|(x, y)| x * y).sum();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn sweep_of_any_function_is_a_valid_side(
        g in weighted(2..=12),
        f in prop::collection::vec(-5i32..5, 12),
    ) {
        let f: Vec<f64> = f[..g.n()].iter().map(|&x| x as f64).collect();
        prop_assume!(f.iter().any(|&x| x != f[0]));
        let cut = sweep_cut(&g, &f).unwrap();
        prop_assert!(!cut.set.is_empty() && cut.set.len() < g.n());
        prop_assert!(2.0 * g.volume(&cut.set).unwrap() <= g.total_volume() + 1e-9);
        prop_assert!((g.conductance(&cut.set).unwrap() - cut.conductance).abs() < 1e-12);
    }
}

#[test]
fn zero_eigenvalues_count_components() {
    // three cliques of sizes 3, 4, 5 with no edges between them
    let mut edges = Vec::new();
    let mut base = 0;
    for size in [3, 4, 5] {
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
        base += size;
    }
    let g = Graph::from_unweighted(12, &edges).unwrap();
    let r = eigenpairs(&g, 5, TOL).unwrap();
    assert_eq!(r.zero_multiplicity(1e-8), g.components().len());
    assert_eq!(r.zero_multiplicity(1e-8), 3);
}
