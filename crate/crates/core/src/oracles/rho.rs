//! Order-k conductance `ρ(k) = min over disjoint A₁..A_k of max_i φ(A_i)`
//! by dynamic programming over vertex bitmasks.
//!
//! `best_j[mask]` is the optimum for `j` disjoint nonempty sets inside
//! `mask`. Level 1 is a subset-minimum over the per-set conductances; level
//! `j` splits off the set holding the lowest vertex of `mask` (or drops that
//! vertex), which costs `O(3^n)` per level. Only the top level is evaluated
//! at the full mask alone.

use serde::Serialize;

use super::{budget, OracleError, MAX_RHO2_N, MAX_RHO_N};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoEntry {
    pub k: usize,
    pub value: f64,
    /// `k` disjoint sets attaining `value`, ordered by `(volume, members)`.
    pub witness: Vec<VertexSet>,
}

/// `ρ(1), …, ρ(k_max)` with witness families.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoProfile {
    pub entries: Vec<RhoEntry>,
}

impl RhoProfile {
    /// `ρ(k)`, 1-based.
    pub fn value(&self, k: usize) -> f64 {
        self.entries[k - 1].value
    }

    pub fn witness(&self, k: usize) -> &[VertexSet] {
        &self.entries[k - 1].witness
    }

    pub fn k_max(&self) -> usize {
        self.entries.len()
    }
}

const NONE: u32 = u32::MAX;

struct Level {
    value: Vec<f64>,
    /// Set chosen for the lowest vertex, or `NONE` when that vertex is left
    /// out. At level 1 this is the minimizing submask itself.
    choice: Vec<u32>,
}

pub fn rho_exact(g: &Graph, k: usize) -> Result<RhoEntry, OracleError> {
    let mut profile = rho_profile(g, k)?;
    Ok(profile.entries.pop().expect("k ≥ 1"))
}

pub fn rho_profile(g: &Graph, k_max: usize) -> Result<RhoProfile, OracleError> {
    let n = g.n();
    if k_max == 0 || k_max > n {
        return Err(OracleError::InvalidK { k: k_max, n });
    }
    let limit = if k_max <= 2 { MAX_RHO2_N } else { MAX_RHO_N };
    budget("rho_exact", n, limit)?;

    let size = 1usize << n;
    let full = (size - 1) as u32;
    let phi = conductances(g);

    let mut levels: Vec<Level> = Vec::with_capacity(k_max);
    levels.push(level_one(&phi));
    let mut entries = vec![RhoEntry {
        k: 1,
        value: 0.0,
        witness: vec![g.vertices()],
    }];
    for j in 2..=k_max {
        let prev = levels.last().expect("level one");
        if j < k_max {
            let level = next_level(&phi, prev);
            levels.push(level);
            let top = levels.last().expect("pushed");
            entries.push(entry(g, j, top.value[full as usize], &levels, full));
        } else {
            let (value, choice) = best_at(&phi, prev, full);
            let mut witness = vec![mask_set(n, choice)];
            witness.extend(unwind(&levels, full & !choice, n));
            entries.push(finish(g, j, value, witness));
        }
    }
    Ok(RhoProfile { entries })
}

fn conductances(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let size = 1usize << n;
    let mut phi = vec![f64::INFINITY; size];
    let mut in_s = vec![false; n];
    let mut cut = 0.0;
    let mut vol = 0.0;
    let mut gray = 0usize;
    for i in 1..size {
        let v = i.trailing_zeros() as usize;
        gray ^= 1 << v;
        let added = gray >> v & 1 == 1;
        let inner: f64 = g.neighbors(v).filter(|&(u, _)| in_s[u]).map(|(_, w)| w).sum();
        let delta = g.degree(v) - 2.0 * inner;
        let sign = if added { 1.0 } else { -1.0 };
        cut += sign * delta;
        vol += sign * g.degree(v);
        in_s[v] = added;
        if vol > 0.0 {
            phi[gray] = cut.max(0.0) / vol;
        }
    }
    phi
}

fn level_one(phi: &[f64]) -> Level {
    let size = phi.len();
    let bits = size.trailing_zeros();
    let mut value = phi.to_vec();
    let mut choice: Vec<u32> = (0..size as u32).collect();
    value[0] = f64::INFINITY;
    choice[0] = NONE;
    for b in 0..bits {
        for mask in 0..size {
            if mask >> b & 1 == 1 {
                let sub = mask ^ (1 << b);
                if value[sub] < value[mask] {
                    value[mask] = value[sub];
                    choice[mask] = choice[sub];
                }
            }
        }
    }
    Level { value, choice }
}

/// Best family at `mask` whose first set holds the lowest vertex of `mask`.
fn best_at(phi: &[f64], prev: &Level, mask: u32) -> (f64, u32) {
    let mut best = (f64::INFINITY, NONE);
    if mask == 0 {
        return best;
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut sub = rest;
    loop {
        let s = sub | low;
        let remaining = prev.value[(mask ^ s) as usize];
        let v = phi[s as usize].max(remaining);
        if v < best.0 {
            best = (v, s);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    best
}

fn next_level(phi: &[f64], prev: &Level) -> Level {
    let size = phi.len();
    let mut value = vec![f64::INFINITY; size];
    let mut choice = vec![NONE; size];
    for mask in 1..size as u32 {
        let low = mask & mask.wrapping_neg();
        let (with_low, s) = best_at(phi, prev, mask);
        let without = value[(mask ^ low) as usize];
        if with_low <= without {
            value[mask as usize] = with_low;
            choice[mask as usize] = s;
        } else {
            value[mask as usize] = without;
            choice[mask as usize] = NONE;
        }
    }
    Level { value, choice }
}

/// Rebuilds the family stored for the top level at `mask`.
fn unwind(levels: &[Level], mut mask: u32, n: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for (depth, level) in levels.iter().enumerate().rev() {
        if depth == 0 {
            out.push(mask_set(n, level.choice[mask as usize]));
            break;
        }
        loop {
            let c = level.choice[mask as usize];
            if c != NONE {
                out.push(mask_set(n, c));
                mask &= !c;
                break;
            }
            let low = mask & mask.wrapping_neg();
            mask ^= low;
        }
    }
    out
}

fn entry(g: &Graph, j: usize, value: f64, levels: &[Level], full: u32) -> RhoEntry {
    let witness = unwind(levels, full, g.n());
    finish(g, j, value, witness)
}

fn finish(g: &Graph, k: usize, value: f64, mut witness: Vec<VertexSet>) -> RhoEntry {
    witness.sort_by(|a, b| g.canonical_cmp(a, b));
    // Report the maximum recomputed from the witness, not the DP's running value.
    let value = witness
        .iter()
        .map(|s| g.conductance(s).unwrap_or(f64::INFINITY))
        .fold(if witness.is_empty() { value } else { 0.0 }, f64::max);
    RhoEntry { k, value, witness }
}

fn mask_set(n: usize, mask: u32) -> VertexSet {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}
