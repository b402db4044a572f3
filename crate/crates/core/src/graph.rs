//! Weighted undirected graphs and the combinatorial quantities built on them:
//! volume, directed cut weight `e(S, T)`, conductance, induced subgraphs and
//! the core coupling ratio used by the local search.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge ({u}, {v}) has invalid weight {weight}; weights must be finite and positive")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex {vertex} is isolated (weighted degree 0)")]
    IsolatedVertex { vertex: usize },
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("set must be a strict nonempty subset of its container")]
    NotStrictSubset,
    #[error("set has zero volume; conductance is undefined")]
    ZeroVolume,
    #[error("coupling ratio is indeterminate (0/0)")]
    Indeterminate,
    #[error("function has {got} values but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
}

/// A canonical vertex subset: sorted, duplicate free.
///
/// Ordering and equality are lexicographic on the member list, which is the
/// secondary key of the global tie-break rule (see [`Graph::canonical_cmp`]).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from members in any order; duplicates collapse.
    pub fn from_vec(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        Self {
            members: (0..n).collect(),
        }
    }

    pub fn singleton(v: usize) -> Self {
        Self { members: vec![v] }
    }

    /// Decodes a bitmask over an ordered universe.
    pub fn from_mask(universe: &[usize], mask: u64) -> Self {
        let members = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        Self::from_vec(members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut members = Vec::with_capacity(self.len() + other.len());
        members.extend_from_slice(&self.members);
        members.extend_from_slice(&other.members);
        Self::from_vec(members)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self {
            members: self.iter().filter(|&v| other.contains(v)).collect(),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self {
            members: self.iter().filter(|&v| !other.contains(v)).collect(),
        }
    }

    /// `V − self` for a graph on `n` vertices.
    pub fn complement(&self, n: usize) -> VertexSet {
        Self {
            members: (0..n).filter(|&v| !self.contains(v)).collect(),
        }
    }

    /// Dense membership table of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_vec(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        Self::from_vec(members.to_vec())
    }
}

/// Immutable weighted undirected graph in compressed adjacency form.
///
/// Neighbor lists are sorted by vertex id. Weighted degrees and the total
/// volume are computed once at construction.
#[derive(Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degree: Vec<f64>,
    total_volume: f64,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edge_count)
            .field("total_volume", &self.total_volume)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an undirected edge list. Rejects self-loops,
    /// non-positive or non-finite weights, repeated pairs and vertices of
    /// degree zero.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let g = Self::build(n, edges)?;
        if let Some(v) = g.isolated_vertices().first() {
            return Err(GraphError::IsolatedVertex { vertex: *v });
        }
        Ok(g)
    }

    /// Unit-weight convenience constructor.
    pub fn from_unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::from_edges(n, &weighted)
    }

    /// Same validation as [`Graph::from_edges`] except that degree-zero
    /// vertices are kept. Only induced subgraphs are built this way.
    pub(crate) fn build(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::InvalidWeight { u, v, weight: w });
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        let mut weights = Vec::with_capacity(2 * edges.len());
        let mut degree = Vec::with_capacity(n);
        offsets.push(0);
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                let (a, b) = (u.min(pair[0].0), u.max(pair[0].0));
                return Err(GraphError::DuplicateEdge { u: a, v: b });
            }
            degree.push(list.iter().map(|&(_, w)| w).sum());
            for &(v, w) in list.iter() {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        let total_volume = degree.iter().sum();
        Ok(Self {
            offsets,
            targets,
            weights,
            degree,
            total_volume,
            edge_count: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `w(u, v)`, zero when the pair is not an edge.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.targets[range.clone()].binary_search(&v) {
            Ok(i) => self.weights[range.start + i],
            Err(_) => 0.0,
        }
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() {
            for (v, w) in self.neighbors(u) {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// True when every edge has weight exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree[v] == 0.0).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Connected components, each canonical, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            label[start] = id;
            while let Some(u) = stack.pop() {
                members.push(u);
                for (v, _) in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = id;
                        stack.push(v);
                    }
                }
            }
            out.push(VertexSet::from_vec(members));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn check(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.members().last() {
            Some(&v) if v >= self.n() => Err(GraphError::InvalidVertex { vertex: v, n: self.n() }),
            _ => Ok(()),
        }
    }

    /// `vol(S) = Σ_{v∈S} w(v)`.
    pub fn volume(&self, s: &VertexSet) -> Result<f64, GraphError> {
        self.check(s)?;
        Ok(s.iter().map(|v| self.degree[v]).sum())
    }

    /// Directed cut weight `e(S, T) = Σ_{u∈S, v∈T−S} w(u, v)`. The sets may
    /// overlap; the result is symmetric in `(S, T)` only when they are
    /// disjoint.
    pub fn cut_weight(&self, s: &VertexSet, t: &VertexSet) -> Result<f64, GraphError> {
        self.check(s)?;
        self.check(t)?;
        let in_s = s.mask(self.n());
        let in_t = t.mask(self.n());
        Ok(self.cut_masked(s, |v| in_t[v] && !in_s[v]))
    }

    /// `w(S, V−S)`.
    pub fn boundary(&self, s: &VertexSet) -> Result<f64, GraphError> {
        self.check(s)?;
        let in_s = s.mask(self.n());
        Ok(self.cut_masked(s, |v| !in_s[v]))
    }

    fn cut_masked(&self, s: &VertexSet, target: impl Fn(usize) -> bool) -> f64 {
        s.iter()
            .flat_map(|u| self.neighbors(u))
            .filter(|&(v, _)| target(v))
            .map(|(_, w)| w)
            .sum()
    }

    /// `φ(S) = w(S, V−S) / vol(S)`, for any nonempty `S` regardless of
    /// which side of the volume split it falls on.
    pub fn conductance(&self, s: &VertexSet) -> Result<f64, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let vol = self.volume(s)?;
        if vol == 0.0 {
            return Err(GraphError::ZeroVolume);
        }
        Ok(self.boundary(s)? / vol)
    }

    /// Coupling ratio of `S` inside a core `B`:
    ///
    /// `φ(S, B) = e(S, B) / ((vol(B−S)/vol(B)) · e(S, V−B))`
    ///
    /// Requires `∅ ⊂ S ⊂ B` strictly. A zero denominator with a positive
    /// numerator yields `+∞`; `0/0` is an error.
    pub fn varphi(&self, s: &VertexSet, b: &VertexSet) -> Result<f64, GraphError> {
        let parts = self.varphi_parts(s, b)?;
        parts.ratio()
    }

    pub(crate) fn varphi_parts(&self, s: &VertexSet, b: &VertexSet) -> Result<VarphiParts, GraphError> {
        self.check(s)?;
        self.check(b)?;
        if s.is_empty() || s.len() >= b.len() || !s.is_subset(b) {
            return Err(GraphError::NotStrictSubset);
        }
        let in_s = s.mask(self.n());
        let in_b = b.mask(self.n());
        let mut inside = 0.0;
        let mut outside = 0.0;
        for u in s.iter() {
            for (v, w) in self.neighbors(u) {
                if !in_b[v] {
                    outside += w;
                } else if !in_s[v] {
                    inside += w;
                }
            }
        }
        let vol_b = self.volume(b)?;
        let vol_rest = vol_b - self.volume(s)?;
        Ok(VarphiParts {
            inside,
            outside,
            vol_rest,
            vol_b,
        })
    }

    /// `G[P]` with a map from local ids back to ids of `self`.
    pub fn induced_subgraph(&self, p: &VertexSet) -> Result<InducedSubgraph, GraphError> {
        if p.is_empty() {
            return Err(GraphError::EmptySet);
        }
        self.check(p)?;
        let mut local = vec![usize::MAX; self.n()];
        for (i, v) in p.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for u in p.iter() {
            for (v, w) in self.neighbors(u) {
                if u < v && local[v] != usize::MAX {
                    edges.push((local[u], local[v], w));
                }
            }
        }
        let graph = Graph::build(p.len(), &edges)?;
        let isolated = graph.isolated_vertices();
        Ok(InducedSubgraph {
            graph,
            to_parent: p.members().to_vec(),
            isolated,
        })
    }

    /// `φ_{G[P]}(S)` without materializing `G[P]`: degrees are taken inside
    /// `P`. Requires `∅ ⊂ S ⊂ P` strictly.
    pub fn conductance_in_induced(&self, p: &VertexSet, s: &VertexSet) -> Result<f64, GraphError> {
        self.check(p)?;
        self.check(s)?;
        if s.is_empty() || s.len() >= p.len() || !s.is_subset(p) {
            return Err(GraphError::NotStrictSubset);
        }
        let in_p = p.mask(self.n());
        let in_s = s.mask(self.n());
        let mut cut = 0.0;
        let mut vol = 0.0;
        for u in s.iter() {
            for (v, w) in self.neighbors(u) {
                if in_p[v] {
                    vol += w;
                    if !in_s[v] {
                        cut += w;
                    }
                }
            }
        }
        if vol == 0.0 {
            return Err(GraphError::ZeroVolume);
        }
        Ok(cut / vol)
    }

    /// Global tie-break between sets: smaller volume first, then
    /// lexicographically smaller member list.
    pub fn canonical_cmp(&self, a: &VertexSet, b: &VertexSet) -> Ordering {
        let va: f64 = a.iter().map(|v| self.degree[v]).sum();
        let vb: f64 = b.iter().map(|v| self.degree[v]).sum();
        va.total_cmp(&vb).then_with(|| a.cmp(b))
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v, w)| (perm[u], perm[v], w))
            .collect();
        Graph::build(self.n(), &edges)
    }
}

/// The four quantities of the coupling ratio, kept apart so callers can
/// compare against a bound by cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub(crate) struct VarphiParts {
    /// `e(S, B)`
    pub inside: f64,
    /// `e(S, V−B)`
    pub outside: f64,
    /// `vol(B−S)`
    pub vol_rest: f64,
    pub vol_b: f64,
}

impl VarphiParts {
    pub fn denominator(&self) -> f64 {
        self.vol_rest / self.vol_b * self.outside
    }

    pub fn ratio(&self) -> Result<f64, GraphError> {
        let den = self.denominator();
        match (self.inside > 0.0, den > 0.0) {
            (_, true) => Ok(self.inside / den),
            (true, false) => Ok(f64::INFINITY),
            (false, false) => Err(GraphError::Indeterminate),
        }
    }

    /// `φ(S, B) ≤ bound`, in the multiplied-out form
    /// `e(S, B) ≤ bound · (vol(B−S)/vol(B)) · e(S, V−B)`; a `0/0` ratio
    /// satisfies it.
    pub fn at_most(&self, bound: f64) -> bool {
        self.inside <= bound * self.denominator()
    }
}

/// Result of [`Graph::induced_subgraph`].
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_parent[local] = parent id`
    pub to_parent: Vec<usize>,
    /// Local ids with no neighbor inside the subset.
    pub isolated: Vec<usize>,
}

impl InducedSubgraph {
    pub fn has_isolated(&self) -> bool {
        !self.isolated.is_empty()
    }

    /// Maps a subset of the parent's ids into local ids; members outside the
    /// induced vertex set are dropped.
    pub fn to_local(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .filter_map(|v| self.to_parent.binary_search(&v).ok())
            .collect()
    }

    pub fn to_parent_set(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.to_parent[v]).collect()
    }
}
