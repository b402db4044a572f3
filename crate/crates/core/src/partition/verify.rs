use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::CorePartition;
use super::PartitionError;
use crate::graph::{Graph, VertexSet};
use crate::oracles::{inside_conductance_exact, MAX_INSIDE_N};
use crate::spectral::{eigenpairs, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Exhaustive inside conductance; parts above the oracle budget are an
    /// error.
    Exact,
    /// `λ₂(G[P])/2` as the inside lower bound.
    Spectral,
    /// Exact where the budget allows, spectral elsewhere.
    Auto,
}

impl FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Self::Exact),
            "spectral" => Ok(Self::Spectral),
            "auto" => Ok(Self::Auto),
            other => Err(format!("unknown mode '{other}' (expected exact, spectral or auto)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsideCertificate {
    /// `λ₂` of the induced subgraph; 0 when it is disconnected.
    pub lambda2: Option<f64>,
    /// `λ₂/2 ≤ φ(G[P])`
    pub spectral_lower: Option<f64>,
    /// `φ(G[P]) ≤ √(2λ₂)`
    pub spectral_upper: Option<f64>,
    pub exact: Option<f64>,
    pub witness: Option<VertexSet>,
    /// The lower bound used for the verdict: exact when available,
    /// otherwise `λ₂/2`. Absent for single-vertex parts, which have no cut.
    pub certified: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub index: usize,
    pub size: usize,
    pub volume: f64,
    /// `φ(Pᵢ)` in the whole graph.
    pub outside: f64,
    pub inside: InsideCertificate,
    pub outside_ok: bool,
    pub inside_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub phi_in_required: f64,
    pub phi_out_required: f64,
    pub mode: VerifyMode,
    pub parts: Vec<PartReport>,
    pub passed: bool,
}

/// Certifies a `(phi_in, phi_out)`-clustering: every part must have
/// outside conductance at most `phi_out_req` and inside conductance at
/// least `phi_in_req`.
pub fn verify_clustering(
    g: &Graph,
    parts: &[VertexSet],
    phi_in_req: f64,
    phi_out_req: f64,
    mode: VerifyMode,
    tol: f64,
) -> Result<VerificationReport, PartitionError> {
    let as_state = CorePartition {
        parts: parts.to_vec(),
        cores: parts.to_vec(),
    };
    as_state.validate(g.n())?;
    if mode == VerifyMode::Exact {
        if let Some((i, p)) = parts.iter().enumerate().find(|(_, p)| p.len() > MAX_INSIDE_N) {
            return Err(PartitionError::TooLargeForExact {
                part: i,
                size: p.len(),
                limit: MAX_INSIDE_N,
            });
        }
    }
    let mut reports = Vec::with_capacity(parts.len());
    for (index, p) in parts.iter().enumerate() {
        let outside = g.conductance(p)?;
        let inside = certify_inside(g, p, mode, tol)?;
        let outside_ok = outside <= phi_out_req + 1e-12 * phi_out_req.abs().max(1.0);
        let inside_ok = match inside.certified {
            Some(c) => c >= phi_in_req - 1e-12 * phi_in_req.abs().max(1.0),
            None => true,
        };
        reports.push(PartReport {
            index,
            size: p.len(),
            volume: g.volume(p)?,
            outside,
            inside,
            outside_ok,
            inside_ok,
        });
    }
    let passed = reports.iter().all(|r| r.outside_ok && r.inside_ok);
    Ok(VerificationReport {
        phi_in_required: phi_in_req,
        phi_out_required: phi_out_req,
        mode,
        parts: reports,
        passed,
    })
}

fn certify_inside(g: &Graph, p: &VertexSet, mode: VerifyMode, tol: f64) -> Result<InsideCertificate, PartitionError> {
    if p.len() < 2 {
        return Ok(InsideCertificate {
            lambda2: None,
            spectral_lower: None,
            spectral_upper: None,
            exact: None,
            witness: None,
            certified: None,
        });
    }
    let sub = g.induced_subgraph(p)?;
    let lambda2 = if sub.graph.is_connected() {
        match eigenpairs(&sub.graph, 2, tol) {
            Ok(r) => r.eigenvalues[1],
            Err(SpectralError::NoConvergence { .. }) => {
                let opts = crate::spectral::EigenOptions {
                    seed: 1,
                    ..crate::spectral::EigenOptions::with_tol(tol)
                };
                crate::spectral::eigenpairs_with(&sub.graph, 2, &opts)?.eigenvalues[1]
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        0.0
    };
    let run_exact = match mode {
        VerifyMode::Exact => true,
        VerifyMode::Spectral => false,
        VerifyMode::Auto => p.len() <= MAX_INSIDE_N,
    };
    let (exact, witness) = if run_exact {
        let r = inside_conductance_exact(g, p)?;
        (Some(r.value), Some(r.witness))
    } else {
        (None, None)
    };
    let spectral_lower = lambda2 / 2.0;
    Ok(InsideCertificate {
        lambda2: Some(lambda2),
        spectral_lower: Some(spectral_lower),
        spectral_upper: Some((2.0 * lambda2).sqrt()),
        certified: Some(exact.unwrap_or(spectral_lower)),
        exact,
        witness,
    })
}
