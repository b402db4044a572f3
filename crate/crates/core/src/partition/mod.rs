//! Local search for a partition into parts that are expanders inside and
//! sparse outside, with verification and trace replay.

mod algo;
mod claims;
mod state;
mod thresholds;
mod verify;

use thiserror::Error;

use crate::graph::GraphError;
use crate::oracles::OracleError;
use crate::spectral::SpectralError;

pub use algo::{
    check_while_condition, partition_into_expanders, step, ClusteringReport, PartialRun, TraceEvent, Trigger,
    TriggerKind, REPORT_SCHEMA,
};
pub use claims::{claim_suite, ClaimReport, CORE_BOUND_SLACK};
pub use state::{Action, CorePartition, StateError};
pub use thresholds::{
    compute_thresholds, compute_thresholds_for, default_cap, AlgoConfig, Thresholds, ITERATION_CONSTANT,
};
pub use verify::{verify_clustering, InsideCertificate, PartReport, VerificationReport, VerifyMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid partition state: {0}")]
    State(#[from] StateError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("lambda_{k} = {lambda_k:e} is not above tol = {tol:e}; the graph has at least {k} components")]
    LambdaTooSmall { k: usize, lambda_k: f64, tol: f64 },
    #[error("iteration cap of {cap} reached before the search converged")]
    CapExceeded { cap: usize, partial: Box<PartialRun> },
    #[error("internal invariant broken: {0}")]
    Invariant(String),
    #[error("part {part} has {size} vertices, above the exact budget of {limit}; use spectral mode")]
    TooLargeForExact { part: usize, size: usize, limit: usize },
    #[error("claim '{claim}' violated{}: {detail}", event.map(|e| format!(" at event {e}")).unwrap_or_default())]
    ClaimViolated {
        claim: String,
        event: Option<usize>,
        detail: String,
    },
}
