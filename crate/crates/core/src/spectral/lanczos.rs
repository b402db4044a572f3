//! Lanczos with full reorthogonalization and locking.
//!
//! The kernel vector `D^{1/2}·1` is known exactly and locked up front. Each
//! further pair is found by a fresh Lanczos run started from a seeded random
//! vector kept orthogonal to everything already locked, so repeated
//! eigenvalues are recovered one copy per run.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply_unchecked, dot, residual, SpectralError};
use crate::graph::Graph;

const MAX_RESTARTS: usize = 8;

pub(super) fn smallest(
    g: &Graph,
    k: usize,
    tol: f64,
    seed: u64,
    budget: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectralError> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matvecs = 0usize;

    let mut kernel: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
    normalize(&mut kernel);
    let mut values = vec![0.0];
    let mut locked = vec![kernel];

    while locked.len() < k {
        let mut start = random_unit(&mut rng, n, &locked);
        let mut best = f64::INFINITY;
        let mut found = None;
        for _ in 0..MAX_RESTARTS {
            match run(g, &locked, start, tol, budget, &mut matvecs)? {
                Outcome::Converged(theta, x) => {
                    found = Some((theta, x));
                    break;
                }
                Outcome::Stalled(x, r) => {
                    best = best.min(r);
                    start = x;
                }
            }
        }
        let Some((theta, x)) = found else {
            let mut residuals = vec![0.0; locked.len()];
            residuals.push(best);
            return Err(SpectralError::NoConvergence { residuals, matvecs });
        };
        values.push(theta);
        locked.push(x);
    }
    values.truncate(k);
    locked.truncate(k);
    Ok((values, locked))
}

enum Outcome {
    Converged(f64, Vec<f64>),
    /// Krylov space exhausted without reaching `tol`; carries the best Ritz
    /// vector and its residual so the caller can restart from it.
    Stalled(Vec<f64>, f64),
}

fn run(
    g: &Graph,
    locked: &[Vec<f64>],
    start: Vec<f64>,
    tol: f64,
    budget: usize,
    matvecs: &mut usize,
) -> Result<Outcome, SpectralError> {
    let capacity = g.n() - locked.len();
    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut next_check = 4usize;

    loop {
        let j = basis.len() - 1;
        if *matvecs >= budget {
            return Err(SpectralError::NoConvergence {
                residuals: vec![f64::INFINITY],
                matvecs: *matvecs,
            });
        }
        let mut w = apply_unchecked(g, &basis[j]);
        *matvecs += 1;
        let alpha = dot(&basis[j], &w);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            axpy(&mut w, -betas[j - 1], &basis[j - 1]);
        }
        for _ in 0..2 {
            for q in locked.iter().chain(basis.iter()) {
                let c = dot(q, &w);
                axpy(&mut w, -c, q);
            }
        }
        let beta = dot(&w, &w).sqrt();
        alphas.push(alpha);
        let m = alphas.len();
        let exhausted = m >= capacity || beta <= 1e-13;

        if m >= next_check || exhausted {
            next_check = m + (m / 4).max(4);
            let (theta, y) = smallest_ritz(&alphas, &betas);
            if beta * y[m - 1].abs() <= 0.1 * tol || exhausted {
                let mut x = vec![0.0; g.n()];
                for (q, c) in basis.iter().zip(&y) {
                    axpy(&mut x, *c, q);
                }
                normalize(&mut x);
                let r = residual(g, &x, theta);
                *matvecs += 1;
                if r <= tol {
                    return Ok(Outcome::Converged(theta, x));
                }
                if exhausted {
                    return Ok(Outcome::Stalled(x, r));
                }
            }
        }
        betas.push(beta);
        scale(&mut w, 1.0 / beta);
        basis.push(w);
    }
}

fn smallest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let i = (0..m)
        .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .unwrap_or(0);
    (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect())
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize, locked: &[Vec<f64>]) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for q in locked {
                let c = dot(q, &v);
                axpy(&mut v, -c, q);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            scale(&mut v, 1.0 / norm);
            return v;
        }
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    scale(v, 1.0 / norm);
}

fn scale(v: &mut [f64], a: f64) {
    v.iter_mut().for_each(|x| *x *= a);
}
