//! Exponential-time exact references.
//!
//! Everything here enumerates subsets or set families outright and refuses
//! inputs above a fixed size budget instead of approximating. They are the
//! ground truth the polynomial-time code is checked against.

mod cores;
mod existential;
mod rho;
mod subsets;

use thiserror::Error;

use crate::graph::{GraphError, VertexSet};
use crate::spectral::SpectralError;

pub use cores::{
    build_cores_reference, home_share_slack, merge_reference, CoreBuild, CoreStep, MergeMove,
    MergeResult, DEFAULT_MOVE_CAP,
};
pub(crate) use cores::argmax_other;
pub use existential::{existential_suite, Check, ExistentialReport};
pub use rho::{rho_exact, rho_profile, RhoEntry, RhoProfile};
pub use subsets::{
    inside_conductance_exact, min_conductance_exact, min_varphi_exact, InsideConductance,
    MinVarphi,
};

/// Largest graph accepted by [`min_conductance_exact`].
pub const MAX_SUBSET_N: usize = 24;
/// Largest part accepted by [`inside_conductance_exact`].
pub const MAX_INSIDE_N: usize = 18;
/// Largest core accepted by [`min_varphi_exact`].
pub const MAX_CORE_N: usize = 20;
/// Largest total number of non-core vertices accepted by [`merge_reference`].
pub const MAX_FREE_N: usize = 20;
/// Largest graph accepted by [`rho_exact`] for `k ≤ 2`.
pub const MAX_RHO2_N: usize = 20;
/// Largest graph accepted by [`rho_exact`] for `k ≥ 3`.
pub const MAX_RHO_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{what}: size {size} exceeds the exact enumeration budget of {limit}")]
    Budget {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("set of size {size} has no strict nonempty subsets")]
    NoStrictSubsets { size: usize },
    #[error("cannot place {k} disjoint nonempty sets in {n} vertices")]
    InvalidK { k: usize, n: usize },
    #[error("input sets are not pairwise disjoint (vertex {vertex} repeated)")]
    NotDisjoint { vertex: usize },
    #[error("epsilon must lie in (0, 1), got {eps}")]
    InvalidEpsilon { eps: f64 },
    #[error("move cap of {cap} exceeded")]
    MoveCap { cap: usize },
    #[error("claim violated: {0}")]
    ClaimViolated(String),
}

pub(crate) fn budget(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::Budget { what, size, limit })
    } else {
        Ok(())
    }
}

pub(crate) fn check_disjoint(n: usize, sets: &[VertexSet]) -> Result<(), OracleError> {
    let mut seen = vec![false; n];
    for s in sets {
        for v in s.iter() {
            if v >= n {
                return Err(GraphError::InvalidVertex { vertex: v, n }.into());
            }
            if seen[v] {
                return Err(OracleError::NotDisjoint { vertex: v });
            }
            seen[v] = true;
        }
    }
    Ok(())
}

/// Relative slack for comparisons between quantities that are equal in
/// exact arithmetic but computed along different floating point paths.
pub(crate) fn slack(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}
