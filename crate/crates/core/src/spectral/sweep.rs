use serde::Serialize;

use super::{eigenpairs_with, EigenOptions, SpectralError};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCut {
    pub set: VertexSet,
    pub conductance: f64,
}

/// Best threshold cut of `f`.
///
/// Vertices are ordered by `(f(v), v)`. Each of the `n − 1` proper prefixes
/// is replaced by itself or its complement, whichever has volume at most
/// half the total (the lexicographically smaller one at exactly half), and
/// the candidate of least conductance wins. Equal conductances fall back to
/// the global tie-break on `(volume, members)`.
pub fn sweep_cut(g: &Graph, f: &[f64]) -> Result<SweepCut, SpectralError> {
    super::check_function(g, f)?;
    let n = g.n();
    if f.iter().all(|&x| x == f[0]) {
        return Err(SpectralError::ConstantFunction);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));

    let total = g.total_volume();
    let mut in_prefix = vec![false; n];
    let mut vol = 0.0;
    let mut cut = 0.0;
    let mut best: Option<(f64, VertexSet)> = None;
    for (j, &v) in order[..n - 1].iter().enumerate() {
        let inner: f64 = g.neighbors(v).filter(|&(u, _)| in_prefix[u]).map(|(_, w)| w).sum();
        cut += g.degree(v) - 2.0 * inner;
        vol += g.degree(v);
        in_prefix[v] = true;

        let rest = total - vol;
        let side_vol = vol.min(rest);
        if side_vol <= 0.0 {
            continue;
        }
        let phi = cut.max(0.0) / side_vol;
        if let Some((best_phi, _)) = &best {
            if phi > *best_phi {
                continue;
            }
        }
        let prefix = VertexSet::from_vec(order[..=j].to_vec());
        let candidate = if 2.0 * vol < total {
            prefix
        } else if 2.0 * vol > total {
            prefix.complement(n)
        } else {
            let complement = prefix.complement(n);
            prefix.min(complement)
        };
        let better = match &best {
            None => true,
            Some((best_phi, best_set)) => {
                phi < *best_phi || g.canonical_cmp(&candidate, best_set).is_lt()
            }
        };
        if better {
            best = Some((phi, candidate));
        }
    }
    let (_, set) = best.ok_or(SpectralError::ConstantFunction)?;
    let conductance = g.conductance(&set)?;
    Ok(SweepCut { set, conductance })
}

/// Spectral partitioning: second eigenvector, pulled back by `D^{-1/2}`,
/// then [`sweep_cut`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bisection {
    pub set: VertexSet,
    pub conductance: f64,
    pub lambda2: f64,
}

impl Bisection {
    /// `λ₂/2`, a lower bound on the graph's conductance.
    pub fn cheeger_lower(&self) -> f64 {
        self.lambda2 / 2.0
    }

    /// `√(2λ₂)`, the sweep guarantee.
    pub fn cheeger_upper(&self) -> f64 {
        (2.0 * self.lambda2.max(0.0)).sqrt()
    }
}

pub fn spectral_bisect(g: &Graph, tol: f64) -> Result<Bisection, SpectralError> {
    spectral_bisect_with(g, &EigenOptions::with_tol(tol))
}

/// As [`spectral_bisect`]; a disconnected graph returns its first component
/// under the `(volume, members)` order, which has conductance zero.
pub fn spectral_bisect_with(g: &Graph, opts: &EigenOptions) -> Result<Bisection, SpectralError> {
    if g.n() < 2 {
        return Err(SpectralError::TooSmall);
    }
    let spectrum = eigenpairs_with(g, 2, opts)?;
    let lambda2 = spectrum.eigenvalues[1];
    let components = g.components();
    if components.len() > 1 {
        let set = components
            .into_iter()
            .min_by(|a, b| g.canonical_cmp(a, b))
            .expect("at least two components");
        return Ok(Bisection {
            conductance: g.conductance(&set)?,
            set,
            lambda2,
        });
    }
    let cut = sweep_cut(g, &spectrum.embedding(g, 1))?;
    Ok(Bisection {
        set: cut.set,
        conductance: cut.conductance,
        lambda2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_TOL;

    fn complete_edges(offset: usize, n: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((offset + u, offset + v));
            }
        }
        edges
    }

    fn dumbbell(size: usize) -> Graph {
        let mut edges = complete_edges(0, size);
        edges.extend(complete_edges(size, size));
        edges.push((0, size));
        Graph::from_unweighted(2 * size, &edges).unwrap()
    }

    #[test]
    fn sweep_finds_triangle_of_bridged_triangles() {
        let g = dumbbell(3);
        let b = spectral_bisect(&g, DEFAULT_TOL).unwrap();
        assert!(b.set == [0, 1, 2].into() || b.set == [3, 4, 5].into());
        assert!((b.conductance - 1.0 / 7.0).abs() < 1e-12);
        assert!(b.conductance <= b.cheeger_upper());
        assert!(b.cheeger_lower() <= b.conductance);
    }

    #[test]
    fn sweep_finds_bell_of_k5_dumbbell() {
        let g = dumbbell(5);
        let b = spectral_bisect(&g, DEFAULT_TOL).unwrap();
        assert!(b.set == VertexSet::from_vec((0..5).collect()) || b.set == VertexSet::from_vec((5..10).collect()));
    }

    #[test]
    fn sweep_on_cycle_returns_half_arc() {
        let edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let g = Graph::from_unweighted(8, &edges).unwrap();
        let b = spectral_bisect(&g, DEFAULT_TOL).unwrap();
        assert_eq!(b.set.len(), 4);
        assert_eq!(b.conductance, 0.25);
        let bound = (2.0 * (1.0 - (std::f64::consts::PI / 4.0).cos())).sqrt();
        assert!(b.conductance <= bound);
    }

    #[test]
    fn constant_function_is_rejected() {
        let g = dumbbell(3);
        assert_eq!(sweep_cut(&g, &[2.0; 6]), Err(SpectralError::ConstantFunction));
    }

    #[test]
    fn sweep_respects_volume_half() {
        let g = dumbbell(4);
        let f: Vec<f64> = (0..8).map(|v| v as f64).collect();
        let cut = sweep_cut(&g, &f).unwrap();
        assert!(2.0 * g.volume(&cut.set).unwrap() <= g.total_volume());
        assert_eq!(cut.set, [0, 1, 2, 3].into());
    }

    #[test]
    fn disconnected_bisect_returns_component() {
        let mut edges = complete_edges(0, 3);
        edges.extend(complete_edges(3, 4));
        let g = Graph::from_unweighted(7, &edges).unwrap();
        let b = spectral_bisect(&g, DEFAULT_TOL).unwrap();
        assert!(b.lambda2.abs() < 1e-9);
        assert_eq!(b.conductance, 0.0);
        assert_eq!(b.set, [0, 1, 2].into());
    }
}
