//! Reference constructions of cores from low-conductance sets, and of a
//! partition around those cores.

use std::cmp::Ordering;

use serde::Serialize;

use super::subsets::{gray_walk, lex_cmp};
use super::{budget, check_disjoint, min_varphi_exact, slack, OracleError, MAX_CORE_N, MAX_FREE_N};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::partition::CorePartition;

pub const DEFAULT_MOVE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreStep {
    pub index: usize,
    pub before: VertexSet,
    /// Minimizer of the coupling ratio inside `before`.
    pub split: VertexSet,
    pub varphi: f64,
    pub after: VertexSet,
    pub phi_before: f64,
    pub phi_after: f64,
    /// Subsets skipped as `0/0` while searching for `split`.
    pub excluded: usize,
}

impl CoreStep {
    pub fn monotone(&self) -> bool {
        self.phi_after <= self.phi_before
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreBuild {
    pub cores: Vec<VertexSet>,
    pub steps: Vec<CoreStep>,
}

impl CoreBuild {
    /// True when no step raised the conductance of its core.
    pub fn monotone(&self) -> bool {
        self.steps.iter().all(CoreStep::monotone)
    }
}

/// Shrinks each `Aᵢ` while some strict subset `S` has `φ(S, Bᵢ) ≤ eps/3`,
/// keeping whichever of `S`, `Bᵢ − S` has the smaller conductance. The
/// subset tested each round is the exhaustive minimizer of the ratio.
///
/// Conductance is not forced to decrease here; [`CoreStep::monotone`]
/// reports it, since it only holds when the inputs sit below a gap.
pub fn build_cores_reference(g: &Graph, a_list: &[VertexSet], eps: f64) -> Result<CoreBuild, OracleError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OracleError::InvalidEpsilon { eps });
    }
    check_disjoint(g.n(), a_list)?;
    for a in a_list {
        if a.is_empty() {
            return Err(GraphError::EmptySet.into());
        }
        budget("build_cores_reference", a.len(), MAX_CORE_N)?;
    }
    let bound = eps / 3.0;
    let mut cores = Vec::with_capacity(a_list.len());
    let mut steps = Vec::new();
    for (index, a) in a_list.iter().enumerate() {
        let mut b = a.clone();
        while b.len() >= 2 {
            let found = match min_varphi_exact(g, &b) {
                Ok(m) => m,
                Err(OracleError::Graph(GraphError::Indeterminate)) => break,
                Err(e) => return Err(e),
            };
            if found.value > bound {
                break;
            }
            let rest = b.difference(&found.set);
            let phi_s = g.conductance(&found.set)?;
            let phi_rest = g.conductance(&rest)?;
            let keep_s = match phi_s.total_cmp(&phi_rest) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => g.canonical_cmp(&found.set, &rest).is_le(),
            };
            let (after, phi_after) = if keep_s { (found.set.clone(), phi_s) } else { (rest, phi_rest) };
            steps.push(CoreStep {
                index,
                phi_before: g.conductance(&b)?,
                before: b,
                split: found.set,
                varphi: found.value,
                after: after.clone(),
                phi_after,
                excluded: found.excluded,
            });
            b = after;
        }
        cores.push(b);
    }
    Ok(CoreBuild { cores, steps })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeMove {
    pub from: usize,
    pub to: usize,
    pub set: VertexSet,
    /// `e(S, P_from)` before the move.
    pub weight_from: f64,
    /// `e(S, P_to)` before the move.
    pub weight_to: f64,
    pub potential_before: f64,
    pub potential_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeResult {
    pub partition: CorePartition,
    pub moves: Vec<MergeMove>,
}

/// Grows the cores into a partition. Starts from `Pᵢ = Bᵢ` for all but the
/// last core, whose part takes every remaining vertex, then repeatedly
/// moves a free set `S ⊆ Pᵢ − Bᵢ` with `e(S, Pᵢ) < e(S, Pⱼ)` to the part it
/// is most attached to. Parts are scanned in order; within a part the
/// violating set of fewest vertices (then lexicographically first) moves.
pub fn merge_reference(g: &Graph, cores: &[VertexSet], move_cap: usize) -> Result<MergeResult, OracleError> {
    let n = g.n();
    let k = cores.len();
    if k == 0 {
        return Err(OracleError::InvalidK { k, n });
    }
    check_disjoint(n, cores)?;
    if cores.iter().any(VertexSet::is_empty) {
        return Err(GraphError::EmptySet.into());
    }
    let covered: usize = cores.iter().map(VertexSet::len).sum();
    budget("merge_reference", n - covered, MAX_FREE_N)?;

    let mut parts: Vec<VertexSet> = cores.to_vec();
    let others = cores[..k - 1].iter().fold(VertexSet::new(), |acc, b| acc.union(b));
    parts[k - 1] = others.complement(n);
    let mut state = CorePartition {
        parts,
        cores: cores.to_vec(),
    };

    let mut moves = Vec::new();
    while let Some((from, set)) = (0..k).find_map(|i| violation(g, &state, i).map(|s| (i, s))) {
        if moves.len() >= move_cap {
            return Err(OracleError::MoveCap { cap: move_cap });
        }
        let weights: Vec<f64> = state
            .parts
            .iter()
            .map(|p| g.cut_weight(&set, p))
            .collect::<Result<_, _>>()?;
        let to = argmax_other(&weights, from);
        let potential_before = state.crossing_weight(g);
        state.parts[from] = state.parts[from].difference(&set);
        state.parts[to] = state.parts[to].union(&set);
        let potential_after = state.crossing_weight(g);
        if potential_after >= potential_before {
            return Err(OracleError::ClaimViolated(format!(
                "moving {set:?} from part {from} to part {to} did not lower the crossing weight \
                 ({potential_before} -> {potential_after})"
            )));
        }
        moves.push(MergeMove {
            from,
            to,
            set,
            weight_from: weights[from],
            weight_to: weights[to],
            potential_before,
            potential_after,
        });
    }
    Ok(MergeResult { partition: state, moves })
}

/// Index `j ≠ skip` maximizing `values[j]`, smallest on ties.
pub(crate) fn argmax_other(values: &[f64], skip: usize) -> usize {
    let mut best = usize::MAX;
    for (j, &v) in values.iter().enumerate() {
        if j != skip && (best == usize::MAX || v > values[best]) {
            best = j;
        }
    }
    best
}

/// Walks nonempty `S ⊆ Pᵢ − Bᵢ`, keeping `ext[j] = e(S, Pⱼ)` current
/// (for `j = i` this is `e(S, Pᵢ − S)`).
fn walk_free(g: &Graph, state: &CorePartition, i: usize, mut visit: impl FnMut(u64, &[usize], &[f64])) {
    let n = g.n();
    let free = state.free(i);
    let universe = free.members().to_vec();
    let owner = state.owners(n);
    let mut in_s = vec![false; n];
    let mut ext = vec![0.0; state.ell()];
    gray_walk(universe.len(), |mask, bit, added| {
        let v = universe[bit];
        let sign = if added { 1.0 } else { -1.0 };
        for (u, w) in g.neighbors(v) {
            if in_s[u] {
                ext[owner[v]] -= sign * w;
            } else {
                ext[owner[u]] += sign * w;
            }
        }
        in_s[v] = added;
        visit(mask, &universe, &ext);
    });
}

fn violation(g: &Graph, state: &CorePartition, i: usize) -> Option<VertexSet> {
    let mut best: Option<u64> = None;
    walk_free(g, state, i, |mask, _, ext| {
        let stronger = ext
            .iter()
            .enumerate()
            .any(|(j, &x)| j != i && x - ext[i] > slack(x));
        if !stronger {
            return;
        }
        let better = match best {
            None => true,
            Some(b) => mask
                .count_ones()
                .cmp(&b.count_ones())
                .then(lex_cmp(mask, b))
                .is_lt(),
        };
        if better {
            best = Some(mask);
        }
    });
    best.map(|mask| VertexSet::from_mask(state.free(i).members(), mask))
}

/// `min over i and nonempty S ⊆ Pᵢ − Bᵢ of e(S, Pᵢ) − e(S, V)/k`. Nonnegative
/// exactly when every free set keeps a `1/k` share of its edges at home;
/// `+∞` when no part has free vertices.
pub fn home_share_slack(g: &Graph, partition: &CorePartition, k: usize) -> Result<f64, OracleError> {
    for i in 0..partition.ell() {
        budget("home_share_slack", partition.free(i).len(), MAX_FREE_N)?;
    }
    let kf = k as f64;
    let mut worst = f64::INFINITY;
    for i in 0..partition.ell() {
        walk_free(g, partition, i, |_, _, ext| {
            let total: f64 = ext.iter().sum();
            worst = worst.min(ext[i] - total / kf);
        });
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_edges(offset: usize, n: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((offset + u, offset + v));
            }
        }
        edges
    }

    #[test]
    fn satisfied_input_is_unchanged() {
        // two K4's joined by one edge; each clique already couples strongly
        let mut edges = complete_edges(0, 4);
        edges.extend(complete_edges(4, 4));
        edges.push((3, 4));
        let g = Graph::from_unweighted(8, &edges).unwrap();
        let a = vec![[0, 1, 2, 3].into(), [4, 5, 6, 7].into()];
        let r = build_cores_reference(&g, &a, 0.5).unwrap();
        assert_eq!(r.cores, a);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn pendant_vertex_is_split_off() {
        // A = K5 on {0..4} plus vertex 5, which hangs off 4 but mostly
        // touches the ten-cycle {6..15}
        let mut edges = complete_edges(0, 5);
        edges.push((4, 5));
        edges.extend((6..16).map(|v| (5, v)));
        edges.extend((6..16).map(|v| (v, 6 + (v - 6 + 1) % 10)));
        let g = Graph::from_unweighted(16, &edges).unwrap();
        let a: VertexSet = [0, 1, 2, 3, 4, 5].into();
        let r = build_cores_reference(&g, std::slice::from_ref(&a), 0.5).unwrap();
        assert_eq!(r.cores[0], [0, 1, 2, 3, 4].into());
        assert_eq!(r.steps.len(), 1);
        let step = &r.steps[0];
        assert_eq!(step.split, [5].into());
        assert!(step.varphi <= 0.5 / 3.0);
        assert!(step.phi_after < step.phi_before);
        assert!(min_varphi_exact(&g, &r.cores[0]).unwrap().value > 0.5 / 3.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::from_unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            build_cores_reference(&g, &[[0].into()], 1.0),
            Err(OracleError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            build_cores_reference(&g, &[[0, 1].into(), [1].into()], 0.5),
            Err(OracleError::NotDisjoint { vertex: 1 })
        ));
    }

    fn subdivided_dumbbell() -> Graph {
        // K4 {0..3} - 8 - K4 {4..7}, with 8 tied twice to the left bell
        let mut edges = complete_edges(0, 4);
        edges.extend(complete_edges(4, 4));
        edges.extend([(2, 8), (3, 8), (8, 4)]);
        Graph::from_unweighted(9, &edges).unwrap()
    }

    #[test]
    fn bridge_midpoint_joins_heavier_side() {
        let g = subdivided_dumbbell();
        let cores = vec![[0, 1, 2, 3].into(), [4, 5, 6, 7].into()];
        let r = merge_reference(&g, &cores, DEFAULT_MOVE_CAP).unwrap();
        assert_eq!(r.partition.parts, vec![[0, 1, 2, 3, 8].into(), [4, 5, 6, 7].into()]);
        assert_eq!(r.moves.len(), 1);
        assert_eq!(r.moves[0].set, [8].into());
        assert!(r.moves[0].potential_after < r.moves[0].potential_before);
        assert!(home_share_slack(&g, &r.partition, 2).unwrap() >= 0.0);
        for (p, b) in r.partition.parts.iter().zip(&r.partition.cores) {
            assert!(g.conductance(p).unwrap() <= 2.0 * g.conductance(b).unwrap() + 1e-12);
        }
    }

    #[test]
    fn no_free_vertices_means_no_moves() {
        let g = subdivided_dumbbell();
        let cores = vec![[0, 1, 2, 3, 8].into(), [4, 5, 6, 7].into()];
        let r = merge_reference(&g, &cores, DEFAULT_MOVE_CAP).unwrap();
        assert!(r.moves.is_empty());
        assert_eq!(r.partition.parts, cores);
        assert_eq!(home_share_slack(&g, &r.partition, 2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn move_cap_is_enforced() {
        let g = subdivided_dumbbell();
        let cores = vec![[0, 1, 2, 3].into(), [4, 5, 6, 7].into()];
        assert!(matches!(merge_reference(&g, &cores, 0), Err(OracleError::MoveCap { cap: 0 })));
    }

    #[test]
    fn argmax_prefers_smallest_index() {
        assert_eq!(argmax_other(&[5.0, 2.0, 2.0], 0), 1);
        assert_eq!(argmax_other(&[1.0, 2.0, 3.0], 2), 1);
    }
}
