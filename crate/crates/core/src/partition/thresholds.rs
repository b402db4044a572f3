use serde::{Deserialize, Serialize};

use super::PartitionError;
use crate::graph::Graph;
use crate::spectral::{eigenpairs_with, EigenOptions, DEFAULT_TOL};

/// Constant of the default iteration cap `C·k·n·|E|`.
pub const ITERATION_CONSTANT: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// Upper bound on the number of parts; the run returns fewer.
    pub k: usize,
    /// Scale of the outside-conductance threshold and of the core bound.
    pub c0: f64,
    pub tol: f64,
    /// Loop iterations allowed before giving up; `8·k·n·|E|` when unset.
    pub max_iterations: Option<usize>,
    pub seed: u64,
}

impl AlgoConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            c0: 1.0,
            tol: DEFAULT_TOL,
            max_iterations: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        if self.k < 2 {
            return Err(PartitionError::InvalidConfig(format!("k must be at least 2, got {}", self.k)));
        }
        if !(self.c0.is_finite() && self.c0 > 0.0) {
            return Err(PartitionError::InvalidConfig(format!("c0 must be positive, got {}", self.c0)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(PartitionError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iterations == Some(0) {
            return Err(PartitionError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, g: &Graph) -> usize {
        self.max_iterations
            .unwrap_or_else(|| default_cap(self.k, g))
    }

    pub(crate) fn eigen_options(&self, seed: u64) -> EigenOptions {
        EigenOptions {
            seed,
            ..EigenOptions::with_tol(self.tol)
        }
    }
}

pub fn default_cap(k: usize, g: &Graph) -> usize {
    ITERATION_CONSTANT
        .saturating_mul(k)
        .saturating_mul(g.n())
        .saturating_mul(g.edge_count())
        .max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub k: usize,
    pub c0: f64,
    pub lambda_k: f64,
    pub lambda_km1: f64,
    /// `min(λ_k/10, 30·c0·k⁵·√λ_{k−1})`
    pub rho_star: f64,
    /// `λ_k / (140·k²)`
    pub phi_in: f64,
    /// `90·c0·k⁶·√λ_{k−1}`
    pub phi_out: f64,
}

impl Thresholds {
    pub fn from_eigenvalues(k: usize, c0: f64, lambda_km1: f64, lambda_k: f64) -> Self {
        let kf = k as f64;
        let root = lambda_km1.max(0.0).sqrt();
        Self {
            k,
            c0,
            lambda_k,
            lambda_km1,
            rho_star: (lambda_k / 10.0).min(30.0 * c0 * kf.powi(5) * root),
            phi_in: lambda_k / (140.0 * kf * kf),
            phi_out: 90.0 * c0 * kf.powi(6) * root,
        }
    }

    /// `(1 + 1/k)^ℓ · ρ*`
    pub fn core_bound(&self, ell: usize) -> f64 {
        (1.0 + 1.0 / self.k as f64).powi(ell as i32) * self.rho_star
    }

    /// `φ_in² / 4`, the inside conductance promised for every output part.
    pub fn inside_target(&self) -> f64 {
        self.phi_in * self.phi_in / 4.0
    }

    /// `ρ* = 0`: no new core can ever be opened.
    pub fn is_degenerate(&self) -> bool {
        self.rho_star <= 0.0
    }
}

pub fn compute_thresholds(g: &Graph, k: usize, c0: f64, tol: f64) -> Result<Thresholds, PartitionError> {
    let cfg = AlgoConfig {
        c0,
        tol,
        ..AlgoConfig::new(k)
    };
    compute_thresholds_for(g, &cfg)
}

pub fn compute_thresholds_for(g: &Graph, cfg: &AlgoConfig) -> Result<Thresholds, PartitionError> {
    cfg.validate()?;
    if cfg.k > g.n() {
        return Err(PartitionError::InvalidConfig(format!(
            "k = {} exceeds the number of vertices {}",
            cfg.k,
            g.n()
        )));
    }
    let spectrum = eigenpairs_with(g, cfg.k, &cfg.eigen_options(cfg.seed))?;
    let lambda_k = spectrum.eigenvalues[cfg.k - 1];
    // a numerically zero eigenvalue would otherwise leak through the root
    let lambda_km1 = match spectrum.eigenvalues[cfg.k - 2] {
        x if x <= cfg.tol => 0.0,
        x => x,
    };
    if lambda_k <= cfg.tol {
        return Err(PartitionError::LambdaTooSmall {
            k: cfg.k,
            lambda_k,
            tol: cfg.tol,
        });
    }
    Ok(Thresholds::from_eigenvalues(cfg.k, cfg.c0, lambda_km1, lambda_k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_unweighted(n, &edges).unwrap()
    }

    #[test]
    fn complete_graph_thresholds() {
        let th = compute_thresholds(&complete(8), 3, 1.0, 1e-9).unwrap();
        assert!((th.lambda_k - 8.0 / 7.0).abs() < 1e-12);
        assert!((th.rho_star - 8.0 / 70.0).abs() < 1e-12);
        assert!((th.phi_in - (8.0 / 7.0) / 1260.0).abs() < 1e-15);
        assert!((th.phi_out - 90.0 * 729.0 * (8.0f64 / 7.0).sqrt()).abs() < 1e-6);
        assert!(!th.is_degenerate());
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((base + u, base + v));
                }
            }
        }
        let g = Graph::from_unweighted(8, &edges).unwrap();
        assert!(matches!(
            compute_thresholds(&g, 2, 1.0, 1e-9),
            Err(PartitionError::LambdaTooSmall { k: 2, .. })
        ));
    }

    #[test]
    fn k_two_is_degenerate() {
        let edges: Vec<_> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
        let g = Graph::from_unweighted(12, &edges).unwrap();
        let th = compute_thresholds(&g, 2, 1.0, 1e-9).unwrap();
        assert_eq!(th.rho_star, 0.0);
        assert_eq!(th.phi_out, 0.0);
        assert!(th.is_degenerate());
        let expected = 1.0 - (2.0 * std::f64::consts::PI / 12.0).cos();
        assert!((th.lambda_k - expected).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        assert!(AlgoConfig::new(1).validate().is_err());
        let mut cfg = AlgoConfig::new(3);
        cfg.c0 = 0.0;
        assert!(cfg.validate().is_err());
        cfg.c0 = 1.0;
        cfg.max_iterations = Some(0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn core_bound_grows_geometrically() {
        let th = Thresholds::from_eigenvalues(4, 1.0, 0.25, 0.5);
        assert_eq!(th.rho_star, 0.05);
        assert!((th.core_bound(2) - 0.05 * 1.5625).abs() < 1e-15);
    }
}
