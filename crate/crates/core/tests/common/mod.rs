#![allow(dead_code)]

use expanders::graph::{Graph, VertexSet};
use proptest::prelude::*;

/// Connected graph on `n` vertices: a spanning path in shuffled order
/// plus the pairs selected by `extra`, with weights drawn from `weights`.
pub fn assemble(n: usize, order: &[usize], extra: &[bool], weights: &[f64]) -> Graph {
    let mut edges = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for pair in order.windows(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        used.insert((u, v));
    }
    let mut idx = 0;
    for u in 0..n {
        for v in u + 1..n {
            if extra[idx % extra.len()] {
                used.insert((u, v));
            }
            idx += 1;
        }
    }
    for (i, (u, v)) in used.into_iter().enumerate() {
        edges.push((u, v, weights[i % weights.len()]));
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn graph_with(n_range: std::ops::RangeInclusive<usize>, weight: BoxedStrategy<f64>) -> impl Strategy<Value = Graph> {
    n_range.prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(prop::bool::weighted(0.3), pairs.max(1)),
            prop::collection::vec(weight.clone(), pairs.max(1)),
        )
            .prop_map(|(n, order, extra, weights)| assemble(n, &order, &extra, &weights))
    })
}

pub fn unweighted(n_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    graph_with(n_range, Just(1.0).boxed())
}

pub fn weighted(n_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    graph_with(n_range, prop_oneof![Just(1.0), 0.05f64..20.0].boxed())
}

/// A graph with a nonempty strict subset of its vertices.
pub fn with_subset(g: impl Strategy<Value = Graph>) -> impl Strategy<Value = (Graph, VertexSet)> {
    g.prop_flat_map(|g| {
        let n = g.n();
        (Just(g), prop::collection::vec(any::<bool>(), n)).prop_filter_map("proper subset", |(g, bits)| {
            let s: VertexSet = (0..bits.len()).filter(|&v| bits[v]).collect();
            (!s.is_empty() && s.len() < g.n()).then_some((g, s))
        })
    })
}

/// Vertex labels in `0..=k` with each of `0..k` used at least once.
pub fn labelling(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    (prop::collection::vec(0..=k, n), Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(move |(mut labels, order)| {
        for (i, &v) in order.iter().take(k).enumerate() {
            labels[v] = i;
        }
        labels
    })
}

pub fn class(labels: &[usize], i: usize) -> VertexSet {
    (0..labels.len()).filter(|&v| labels[v] == i).collect()
}

pub fn indicator(n: usize, s: &VertexSet) -> Vec<f64> {
    (0..n).map(|v| if s.contains(v) { 1.0 } else { 0.0 }).collect()
}
