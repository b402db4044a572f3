//! Normalized Laplacian `ℒ = I − D^{-1/2} A D^{-1/2}`: matrix-free
//! application, Rayleigh quotients, the smallest eigenpairs and the sweep
//! cut built on them.

mod lanczos;
mod sweep;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

pub use sweep::{spectral_bisect, spectral_bisect_with, sweep_cut, Bisection, SweepCut};

/// Relative residual tolerance used when the caller has no preference.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Graphs up to this size are solved densely.
pub const DENSE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("value at vertex {vertex} is not finite")]
    NonFinite { vertex: usize },
    #[error("requested {k} eigenpairs of a graph with {n} vertices")]
    InvalidCount { k: usize, n: usize },
    #[error("vertex {vertex} has degree 0; the normalized Laplacian is undefined")]
    IsolatedVertex { vertex: usize },
    #[error("eigensolver did not converge after {matvecs} matrix-vector products (best residuals {residuals:?})")]
    NoConvergence { residuals: Vec<f64>, matvecs: usize },
    #[error("function is constant; no sweep cut exists")]
    ConstantFunction,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("graph needs at least two vertices")]
    TooSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Bound on `‖ℒf − λf‖ / ‖f‖` for every returned pair.
    pub tol: f64,
    pub method: Method,
    /// Seed of the iterative solver's starting vectors.
    pub seed: u64,
    /// Matrix-vector budget of the iterative solver; `50·n` when unset.
    pub max_matvecs: Option<usize>,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            method: Method::Auto,
            seed: 0,
            max_matvecs: None,
        }
    }
}

impl EigenOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// The `k` smallest eigenpairs of `ℒ`, ascending.
///
/// `eigenvectors[i]` is a unit eigenvector of `ℒ`; [`SpectralResult::embedding`]
/// gives its pullback `D^{-1/2} f`, which is the function whose Rayleigh
/// quotient equals the eigenvalue and which is orthogonal to the other
/// pullbacks in the degree inner product.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// Dense or Iterative; never Auto.
    pub method: Method,
    pub seed: u64,
}

impl SpectralResult {
    pub fn embedding(&self, g: &Graph, i: usize) -> Vec<f64> {
        self.eigenvectors[i]
            .iter()
            .zip(g.degrees())
            .map(|(x, d)| x / d.sqrt())
            .collect()
    }

    /// Eigenvalues below `tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l < tol).count()
    }
}

fn check_function(g: &Graph, f: &[f64]) -> Result<(), SpectralError> {
    if f.len() != g.n() {
        return Err(GraphError::LengthMismatch {
            expected: g.n(),
            got: f.len(),
        }
        .into());
    }
    match f.iter().position(|x| !x.is_finite()) {
        Some(vertex) => Err(SpectralError::NonFinite { vertex }),
        None => Ok(()),
    }
}

fn check_degrees(g: &Graph) -> Result<(), SpectralError> {
    match g.isolated_vertices().first() {
        Some(&vertex) => Err(SpectralError::IsolatedVertex { vertex }),
        None => Ok(()),
    }
}

/// `(ℒf)(v) = f(v) − Σ_u w(u,v) f(u) / √(w(u) w(v))`.
pub fn laplacian_apply(g: &Graph, f: &[f64]) -> Result<Vec<f64>, SpectralError> {
    check_function(g, f)?;
    check_degrees(g)?;
    Ok(apply_unchecked(g, f))
}

pub(crate) fn apply_unchecked(g: &Graph, f: &[f64]) -> Vec<f64> {
    let inv_sqrt: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    (0..g.n())
        .map(|v| {
            let mixed: f64 = g.neighbors(v).map(|(u, w)| w * f[u] * inv_sqrt[u]).sum();
            f[v] - mixed * inv_sqrt[v]
        })
        .collect()
}

/// Dense `ℒ` as an `n × n` matrix.
pub fn laplacian_matrix(g: &Graph) -> Result<DMatrix<f64>, SpectralError> {
    check_degrees(g)?;
    let n = g.n();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (u, v, w) in g.edges() {
        let x = -w / (g.degree(u) * g.degree(v)).sqrt();
        m[(u, v)] = x;
        m[(v, u)] = x;
    }
    Ok(m)
}

/// `R(f) = Σ_{(u,v)∈E} w(u,v)(f(u) − f(v))² / Σ_v w(v) f(v)²`.
pub fn rayleigh_quotient(g: &Graph, f: &[f64]) -> Result<f64, SpectralError> {
    check_function(g, f)?;
    let energy: f64 = g
        .edges()
        .iter()
        .map(|&(u, v, w)| w * (f[u] - f[v]).powi(2))
        .sum();
    let norm: f64 = f.iter().zip(g.degrees()).map(|(x, d)| d * x * x).sum();
    if norm == 0.0 {
        return Err(SpectralError::ZeroFunction);
    }
    Ok(energy / norm)
}

/// The `k` smallest eigenpairs with default options and tolerance `tol`.
pub fn eigenpairs(g: &Graph, k: usize, tol: f64) -> Result<SpectralResult, SpectralError> {
    eigenpairs_with(g, k, &EigenOptions::with_tol(tol))
}

pub fn eigenpairs_with(
    g: &Graph,
    k: usize,
    opts: &EigenOptions,
) -> Result<SpectralResult, SpectralError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(SpectralError::InvalidCount { k, n });
    }
    check_degrees(g)?;
    let method = match opts.method {
        Method::Auto if n <= DENSE_LIMIT => Method::Dense,
        Method::Auto => Method::Iterative,
        m => m,
    };
    let (values, vectors) = match method {
        Method::Dense => dense(g, k)?,
        _ => {
            let budget = opts.max_matvecs.unwrap_or(50 * n).max(1);
            lanczos::smallest(g, k, opts.tol, opts.seed, budget)?
        }
    };
    finish(g, values, vectors, opts.tol, method, opts.seed)
}

fn dense(g: &Graph, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectralError> {
    let eig = SymmetricEigen::new(laplacian_matrix(g)?);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order[..k]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Ok((values, vectors))
}

fn finish(
    g: &Graph,
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    tol: f64,
    method: Method,
    seed: u64,
) -> Result<SpectralResult, SpectralError> {
    let mut pairs: Vec<(f64, Vec<f64>)> = values.into_iter().zip(vectors).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut eigenvalues = Vec::with_capacity(pairs.len());
    let mut eigenvectors = Vec::with_capacity(pairs.len());
    let mut residuals = Vec::with_capacity(pairs.len());
    for (lambda, mut f) in pairs {
        normalize_sign(&mut f);
        residuals.push(residual(g, &f, lambda));
        eigenvalues.push(if (-tol..0.0).contains(&lambda) { 0.0 } else { lambda });
        eigenvectors.push(f);
    }
    if residuals.iter().any(|&r| r.is_nan() || r > tol) {
        return Err(SpectralError::NoConvergence {
            residuals,
            matvecs: 0,
        });
    }
    Ok(SpectralResult {
        eigenvalues,
        eigenvectors,
        residuals,
        method,
        seed,
    })
}

/// `‖ℒf − λf‖ / ‖f‖`.
pub(crate) fn residual(g: &Graph, f: &[f64], lambda: f64) -> f64 {
    let lf = apply_unchecked(g, f);
    let r: f64 = lf
        .iter()
        .zip(f)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum();
    (r / dot(f, f)).sqrt()
}

/// Makes the first clearly nonzero entry positive.
fn normalize_sign(f: &mut [f64]) {
    let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = f.iter().find(|x| x.abs() > 1e-8 * scale) {
        if *first < 0.0 {
            f.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_unweighted(n, &edges).unwrap()
    }

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
    fn kernel_is_sqrt_degree() {
        let g = Graph::from_edges(4, &[(0, 1, 2.0), (1, 2, 0.5), (2, 3, 3.0), (0, 3, 1.0)]).unwrap();
        let f: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
        let lf = laplacian_apply(&g, &f).unwrap();
        assert!(lf.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn k2_antisymmetric_vector_has_eigenvalue_two() {
        let g = Graph::from_unweighted(2, &[(0, 1)]).unwrap();
        assert_eq!(laplacian_apply(&g, &[1.0, -1.0]).unwrap(), vec![2.0, -2.0]);
    }

    #[test]
    fn apply_matches_dense_matrix() {
        let g = cycle(8);
        let f: Vec<f64> = (0..8).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let m = laplacian_matrix(&g).unwrap();
        let dense = &m * nalgebra::DVector::from_vec(f.clone());
        let sparse = laplacian_apply(&g, &f).unwrap();
        for (a, b) in dense.iter().zip(&sparse) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_rejects_non_finite() {
        let g = cycle(4);
        assert_eq!(
            laplacian_apply(&g, &[0.0, f64::NAN, 0.0, 0.0]),
            Err(SpectralError::NonFinite { vertex: 1 })
        );
    }

    #[test]
    fn complete_graph_spectrum() {
        let r = eigenpairs(&complete(4), 4, DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-12);
        for l in &r.eigenvalues[1..] {
            assert!((l - 4.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cycle_second_eigenvalue() {
        let r = eigenpairs(&cycle(8), 2, DEFAULT_TOL).unwrap();
        let expected = 1.0 - (2.0 * std::f64::consts::PI / 8.0).cos();
        assert!((r.eigenvalues[1] - expected).abs() < 1e-12);
        assert!((r.eigenvalues[1] - 0.29289).abs() < 1e-5);
    }

    #[test]
    fn disjoint_triangles_have_double_zero() {
        let g = Graph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let r = eigenpairs(&g, 2, DEFAULT_TOL).unwrap();
        assert_eq!(r.eigenvalues, vec![0.0, 0.0]);
        assert_eq!(r.zero_multiplicity(1e-9), 2);
    }

    #[test]
    fn rayleigh_examples() {
        let g = cycle(6);
        assert_eq!(rayleigh_quotient(&g, &[1.0; 6]).unwrap(), 0.0);
        let indicator = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        let phi = g.conductance(&[0, 1, 2].into()).unwrap();
        assert_eq!(rayleigh_quotient(&g, &indicator).unwrap(), phi);
        assert_eq!(rayleigh_quotient(&g, &[0.0; 6]), Err(SpectralError::ZeroFunction));

        let r = eigenpairs(&g, 2, DEFAULT_TOL).unwrap();
        let f = r.embedding(&g, 1);
        assert!((rayleigh_quotient(&g, &f).unwrap() - r.eigenvalues[1]).abs() < 1e-9);
    }

    #[test]
    fn invalid_counts() {
        let g = cycle(4);
        assert_eq!(eigenpairs(&g, 0, 1e-9).unwrap_err(), SpectralError::InvalidCount { k: 0, n: 4 });
        assert_eq!(eigenpairs(&g, 5, 1e-9).unwrap_err(), SpectralError::InvalidCount { k: 5, n: 4 });
    }

    #[test]
    fn iterative_matches_dense_on_repeated_eigenvalues() {
        let g = complete(7);
        let opts = EigenOptions {
            method: Method::Iterative,
            seed: 3,
            ..EigenOptions::default()
        };
        let it = eigenpairs_with(&g, 4, &opts).unwrap();
        assert_eq!(it.method, Method::Iterative);
        for l in &it.eigenvalues[1..] {
            assert!((l - 7.0 / 6.0).abs() < 1e-8);
        }
        assert!(it.residuals.iter().all(|&r| r <= 1e-9));
    }
}
