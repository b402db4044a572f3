use std::cmp::Ordering;

use serde::Serialize;

use super::{budget, OracleError, MAX_CORE_N, MAX_INSIDE_N, MAX_SUBSET_N};
use crate::graph::{Graph, GraphError, VarphiParts, VertexSet};

/// Lexicographic comparison of the sorted member lists encoded by two masks
/// over the same ordered universe.
pub(crate) fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    // Both lists agree below `x`. The list holding `x` is the smaller one
    // unless the other list ends before `x`.
    let x = diff.trailing_zeros();
    let (a_holds, other) = if a >> x & 1 == 1 { (true, b) } else { (false, a) };
    let holder_smaller = other >> x >> 1 != 0;
    if a_holds == holder_smaller {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Running minimum with the `(value, volume, members)` tie-break.
struct Best {
    value: f64,
    vol: f64,
    mask: u64,
}

impl Best {
    fn offer(slot: &mut Option<Best>, value: f64, vol: f64, mask: u64) {
        let better = match slot {
            None => true,
            Some(b) => value
                .total_cmp(&b.value)
                .then(vol.total_cmp(&b.vol))
                .then(lex_cmp(mask, b.mask))
                .is_lt(),
        };
        if better {
            *slot = Some(Best { value, vol, mask });
        }
    }
}

/// Walks all nonempty subsets of `len` bits in Gray-code order, calling
/// `visit(mask, flipped, added)` after each single-bit flip.
pub(super) fn gray_walk(len: usize, mut visit: impl FnMut(u64, usize, bool)) {
    let mut gray = 0u64;
    for i in 1u64..(1u64 << len) {
        let bit = i.trailing_zeros() as usize;
        gray ^= 1 << bit;
        visit(gray, bit, gray >> bit & 1 == 1);
    }
}

/// `φ(G) = min_{S : vol(S) ≤ vol(V)/2} φ(S)` by exhaustion, with a
/// minimizing set.
pub fn min_conductance_exact(g: &Graph) -> Result<(VertexSet, f64), OracleError> {
    let n = g.n();
    budget("min_conductance_exact", n, MAX_SUBSET_N)?;
    let total = g.total_volume();
    let mut in_s = vec![false; n];
    let mut cut = 0.0;
    let mut vol = 0.0;
    let mut best = None;
    gray_walk(n, |mask, v, added| {
        let inner: f64 = g.neighbors(v).filter(|&(u, _)| in_s[u]).map(|(_, w)| w).sum();
        let delta = g.degree(v) - 2.0 * inner;
        if added {
            cut += delta;
            vol += g.degree(v);
        } else {
            cut -= delta;
            vol -= g.degree(v);
        }
        in_s[v] = added;
        if vol > 0.0 && 2.0 * vol <= total {
            Best::offer(&mut best, cut.max(0.0) / vol, vol, mask);
        }
    });
    let best = best.ok_or(GraphError::ZeroVolume)?;
    let set = VertexSet::from_mask(&(0..n).collect::<Vec<_>>(), best.mask);
    let phi = g.conductance(&set)?;
    Ok((set, phi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InsideConductance {
    /// `φ(G[P])`
    pub value: f64,
    /// A minimizing set in the ids of the host graph.
    pub witness: VertexSet,
}

/// `φ(G[P])` by exhaustion. A disconnected `G[P]` gives 0 with one of its
/// components as witness.
pub fn inside_conductance_exact(g: &Graph, p: &VertexSet) -> Result<InsideConductance, OracleError> {
    budget("inside_conductance_exact", p.len(), MAX_INSIDE_N)?;
    if p.len() < 2 {
        return Err(OracleError::NoStrictSubsets { size: p.len() });
    }
    let sub = g.induced_subgraph(p)?;
    let components = sub.graph.components();
    if components.len() > 1 {
        let first = components
            .iter()
            .min_by(|a, b| sub.graph.canonical_cmp(a, b))
            .expect("nonempty");
        return Ok(InsideConductance {
            value: 0.0,
            witness: sub.to_parent_set(first),
        });
    }
    let (local, value) = min_conductance_exact(&sub.graph)?;
    Ok(InsideConductance {
        value,
        witness: sub.to_parent_set(&local),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinVarphi {
    pub set: VertexSet,
    /// May be `+∞` when every candidate has no edge leaving the core.
    pub value: f64,
    /// Number of strict subsets skipped because their ratio is `0/0`.
    pub excluded: usize,
}

/// `min φ(S, B)` over `∅ ⊂ S ⊂ B`. Indeterminate `0/0` ratios are skipped;
/// `+∞` ratios take part.
pub fn min_varphi_exact(g: &Graph, b: &VertexSet) -> Result<MinVarphi, OracleError> {
    g.check(b)?;
    budget("min_varphi_exact", b.len(), MAX_CORE_N)?;
    if b.len() < 2 {
        return Err(OracleError::NoStrictSubsets { size: b.len() });
    }
    let n = g.n();
    let universe = b.members().to_vec();
    let in_b = b.mask(n);
    let vol_b = g.volume(b)?;
    let (to_core, to_out): (Vec<f64>, Vec<f64>) = universe
        .iter()
        .map(|&v| {
            g.neighbors(v).fold((0.0, 0.0), |(c, o), (u, w)| {
                if in_b[u] {
                    (c + w, o)
                } else {
                    (c, o + w)
                }
            })
        })
        .unzip();

    let full = (1u64 << universe.len()) - 1;
    let mut in_s = vec![false; n];
    let mut inside = 0.0;
    let mut outside = 0.0;
    let mut vol = 0.0;
    let mut excluded = 0usize;
    let mut best = None;
    gray_walk(universe.len(), |mask, bit, added| {
        let v = universe[bit];
        let inner: f64 = g.neighbors(v).filter(|&(u, _)| in_s[u]).map(|(_, w)| w).sum();
        let sign = if added { 1.0 } else { -1.0 };
        inside += sign * (to_core[bit] - 2.0 * inner);
        outside += sign * to_out[bit];
        vol += sign * g.degree(v);
        in_s[v] = added;
        if mask == full {
            return;
        }
        let parts = VarphiParts {
            inside: inside.max(0.0),
            outside: outside.max(0.0),
            vol_rest: vol_b - vol,
            vol_b,
        };
        match parts.ratio() {
            Ok(value) => Best::offer(&mut best, value, vol, mask),
            Err(_) => excluded += 1,
        }
    });
    let best = best.ok_or(GraphError::Indeterminate)?;
    let set = VertexSet::from_mask(&universe, best.mask);
    let value = g.varphi(&set, b)?;
    Ok(MinVarphi {
        set,
        value,
        excluded,
    })
}
