//! Replays a trace and re-derives every guarantee of the local search from
//! the graph alone.

use serde::Serialize;

use super::algo::TraceEvent;
use super::state::{Action, CorePartition};
use super::thresholds::{compute_thresholds_for, default_cap, AlgoConfig, ITERATION_CONSTANT};
use super::verify::{verify_clustering, VerifyMode};
use super::PartitionError;
use crate::graph::Graph;
use crate::oracles::Check;

/// Absolute slack on the core conductance bound.
pub const CORE_BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub events: usize,
    /// The trace ends in a stop event, so the output contract was checked.
    pub completed: bool,
    pub iterations: usize,
    pub iteration_constant: usize,
    pub checks: Vec<Check>,
    pub final_state: CorePartition,
}

/// Checks after every event that the state is a valid partition with
/// nested cores, that `ℓ < k`, that every core has conductance at most
/// `ρ*(1+1/k)^ℓ`, that refinements shrink a core and that transfers lower
/// the crossing weight. A complete trace also gets the output contract and
/// the iteration bound. The first failing check is returned as an error.
pub fn claim_suite(g: &Graph, cfg: &AlgoConfig, trace: &[TraceEvent]) -> Result<ClaimReport, PartitionError> {
    let th = compute_thresholds_for(g, cfg)?;
    let mut state = CorePartition::initial(g.n());
    let mut checks = Vec::new();
    let mut completed = false;
    let mut iterations = 0usize;

    for (idx, event) in trace.iter().enumerate() {
        if completed {
            return Err(PartitionError::ClaimViolated {
                claim: "stop is final".into(),
                event: Some(idx),
                detail: "events follow the stop event".into(),
            });
        }
        match &event.action {
            Action::Stop => {
                completed = true;
                continue;
            }
            Action::Stall { .. } => continue,
            _ => {}
        }
        iterations = iterations.max(event.iteration);
        let before_weight = state.crossing_weight(g);
        let before_core = match &event.action {
            Action::RefineCore { part, .. } => state.cores.get(*part).map(|b| b.len()),
            _ => None,
        };
        state.apply(&event.action).map_err(|e| PartitionError::ClaimViolated {
            claim: "event applies".into(),
            event: Some(idx),
            detail: e.to_string(),
        })?;
        let valid = state.validate(g.n());
        checks.push(Check {
            name: format!("event {idx}: partition with nested cores"),
            lhs: if valid.is_ok() { 1.0 } else { 0.0 },
            relation: "==",
            rhs: 1.0,
            passed: valid.is_ok(),
        });
        let ell = state.ell();
        checks.push(Check {
            name: format!("event {idx}: part count below k"),
            lhs: ell as f64,
            relation: "<",
            rhs: cfg.k as f64,
            passed: ell < cfg.k,
        });
        let worst_core = state
            .cores
            .iter()
            .map(|b| g.conductance(b))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("event {idx}: core conductance within growth bound"),
            worst_core,
            th.core_bound(ell) + CORE_BOUND_SLACK,
        ));
        if let (Action::RefineCore { part, .. }, Some(before)) = (&event.action, before_core) {
            let after = state.cores[*part].len();
            checks.push(Check {
                name: format!("event {idx}: refined core shrinks"),
                lhs: after as f64,
                relation: "<",
                rhs: before as f64,
                passed: after < before,
            });
        }
        if event.action.is_transfer() {
            let after_weight = state.crossing_weight(g);
            checks.push(Check {
                name: format!("event {idx}: crossing weight decreases"),
                lhs: after_weight,
                relation: "<",
                rhs: before_weight,
                passed: after_weight < before_weight,
            });
        }
    }

    if completed {
        let ell = state.ell() as f64;
        for i in 0..state.ell() {
            let free = state.free(i);
            if free.is_empty() {
                continue;
            }
            checks.push(Check::at_least(
                format!("part {i}: free set keeps a 1/l share in its core"),
                g.cut_weight(&free, &state.cores[i])?,
                g.boundary(&free)? / ell,
            ));
        }
        let verification = verify_clustering(g, &state.parts, th.inside_target(), th.phi_out, VerifyMode::Auto, cfg.tol)?;
        for p in &verification.parts {
            checks.push(Check::at_most(
                format!("part {}: outside conductance", p.index),
                p.outside,
                th.phi_out,
            ));
            if let Some(c) = p.inside.certified {
                checks.push(Check::at_least(
                    format!("part {}: inside certificate", p.index),
                    c,
                    th.inside_target(),
                ));
            }
        }
        checks.push(Check::at_most(
            "iterations within 8·k·n·|E|",
            iterations as f64,
            default_cap(cfg.k, g) as f64,
        ));
    }

    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(PartitionError::ClaimViolated {
            claim: bad.name.clone(),
            event: None,
            detail: format!("{} {} {} does not hold", bad.lhs, bad.relation, bad.rhs),
        });
    }
    Ok(ClaimReport {
        events: trace.len(),
        completed,
        iterations,
        iteration_constant: ITERATION_CONSTANT,
        checks,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partition_into_expanders;
    use std::collections::BTreeMap;

    fn dumbbell() -> Graph {
        let mut edges = Vec::new();
        for base in [0, 6] {
            for u in 0..6 {
                for v in u + 1..6 {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((5, 6));
        Graph::from_unweighted(12, &edges).unwrap()
    }

    #[test]
    fn dumbbell_run_passes() {
        let g = dumbbell();
        let cfg = AlgoConfig::new(3);
        let (state, report) = partition_into_expanders(&g, &cfg).unwrap();
        let claims = claim_suite(&g, &cfg, &report.trace).unwrap();
        assert!(claims.completed);
        assert_eq!(claims.final_state, state);
    }

    #[test]
    fn truncated_trace_skips_output_contract() {
        let g = dumbbell();
        let cfg = AlgoConfig::new(3);
        let claims = claim_suite(&g, &cfg, &[]).unwrap();
        assert!(!claims.completed);
        assert!(claims.checks.is_empty());
    }

    #[test]
    fn forged_split_is_caught() {
        let g = dumbbell();
        let cfg = AlgoConfig::new(3);
        // a split whose new core is far above the growth bound
        let forged = vec![TraceEvent {
            iteration: 1,
            trigger: None,
            action: Action::SplitCoreB {
                part: 0,
                kept: (0..10).collect(),
                new_core: [10, 11].into(),
            },
            quantities: BTreeMap::new(),
        }];
        assert!(matches!(
            claim_suite(&g, &cfg, &forged),
            Err(PartitionError::ClaimViolated { .. })
        ));
    }

    #[test]
    fn disconnected_input_fails_upstream() {
        let g = Graph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            claim_suite(&g, &AlgoConfig::new(2), &[]),
            Err(PartitionError::LambdaTooSmall { .. })
        ));
    }
}
