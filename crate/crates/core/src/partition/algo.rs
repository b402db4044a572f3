//! The local search that grows parts and cores until every part is an
//! expander inside and sparse outside.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::state::{Action, CorePartition};
use super::thresholds::{compute_thresholds_for, AlgoConfig, Thresholds};
use super::verify::{verify_clustering, VerificationReport, VerifyMode};
use super::PartitionError;
use crate::graph::{Graph, GraphError, VertexSet};
use crate::oracles::argmax_other;
use crate::spectral::{spectral_bisect_with, SpectralError};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriggerKind {
    /// `e(Pᵢ−Bᵢ, Bᵢ) < e(Pᵢ−Bᵢ, Pⱼ)` for some other part `j`.
    Fold,
    /// The sweep cut of `G[Pᵢ]` is sparse on both sides.
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trigger {
    pub part: usize,
    pub kind: TriggerKind,
    /// For a fold trigger `Pᵢ − Bᵢ`; for a spectral one the sweep set.
    pub set: VertexSet,
    /// The part `j` that fired a fold trigger.
    pub against: Option<usize>,
    /// Both-sided conductance inside `G[Pᵢ]` of a spectral trigger.
    pub inside: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    /// Loop iteration the event belongs to (1-based; stalls and the final
    /// stop share the iteration of the scan that produced them).
    pub iteration: usize,
    pub trigger: Option<Trigger>,
    pub action: Action,
    /// Quantities compared by the branch tests, by name.
    pub quantities: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringReport {
    pub schema: u32,
    pub config: AlgoConfig,
    pub thresholds: Thresholds,
    pub warnings: Vec<String>,
    pub ell: usize,
    pub parts: Vec<VertexSet>,
    pub cores: Vec<VertexSet>,
    pub iterations: usize,
    pub iteration_cap: usize,
    /// Some trigger fired with no applicable branch.
    pub stalled: bool,
    pub verification: VerificationReport,
    pub trace: Vec<TraceEvent>,
}

/// State of a run that hit its iteration cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialRun {
    pub thresholds: Thresholds,
    pub state: CorePartition,
    pub iterations: usize,
    pub trace: Vec<TraceEvent>,
}

/// First firing trigger in scan order: parts ascending, the fold test
/// before the spectral test, other parts ascending.
pub fn check_while_condition(
    g: &Graph,
    state: &CorePartition,
    th: &Thresholds,
    cfg: &AlgoConfig,
) -> Result<Option<Trigger>, PartitionError> {
    for i in 0..state.ell() {
        for kind in [TriggerKind::Fold, TriggerKind::Spectral] {
            if let Some(t) = trigger_at(g, state, th, cfg, i, kind)? {
                return Ok(Some(t));
            }
        }
    }
    Ok(None)
}

fn trigger_at(
    g: &Graph,
    state: &CorePartition,
    th: &Thresholds,
    cfg: &AlgoConfig,
    i: usize,
    kind: TriggerKind,
) -> Result<Option<Trigger>, PartitionError> {
    match kind {
        TriggerKind::Fold => {
            let free = state.free(i);
            if free.is_empty() {
                return Ok(None);
            }
            let home = g.cut_weight(&free, &state.cores[i])?;
            for j in (0..state.ell()).filter(|&j| j != i) {
                if home < g.cut_weight(&free, &state.parts[j])? {
                    return Ok(Some(Trigger {
                        part: i,
                        kind,
                        set: free,
                        against: Some(j),
                        inside: None,
                    }));
                }
            }
            Ok(None)
        }
        TriggerKind::Spectral => {
            let p = &state.parts[i];
            if p.len() < 2 {
                return Ok(None);
            }
            let (set, inside) = sparse_cut(g, p, cfg)?;
            if inside[0] < th.phi_in && inside[1] < th.phi_in {
                Ok(Some(Trigger {
                    part: i,
                    kind,
                    set,
                    against: None,
                    inside: Some(inside),
                }))
            } else {
                Ok(None)
            }
        }
    }
}

/// Sweep cut of `G[P]` in parent ids with the conductance of both sides
/// inside `G[P]`. A disconnected `G[P]` yields its first component under
/// the `(volume, members)` order, and a side of inside volume zero counts
/// as conductance zero.
fn sparse_cut(g: &Graph, p: &VertexSet, cfg: &AlgoConfig) -> Result<(VertexSet, [f64; 2]), PartitionError> {
    let sub = g.induced_subgraph(p)?;
    let components = sub.graph.components();
    let local = if components.len() > 1 {
        components
            .into_iter()
            .min_by(|a, b| sub.graph.canonical_cmp(a, b))
            .expect("two or more components")
    } else {
        match spectral_bisect_with(&sub.graph, &cfg.eigen_options(cfg.seed)) {
            Ok(b) => b.set,
            Err(SpectralError::NoConvergence { .. }) => {
                spectral_bisect_with(&sub.graph, &cfg.eigen_options(cfg.seed.wrapping_add(1)))?.set
            }
            Err(e) => return Err(e.into()),
        }
    };
    let set = sub.to_parent_set(&local);
    let rest = p.difference(&set);
    let side = |s: &VertexSet| match g.conductance_in_induced(p, s) {
        Ok(x) => Ok(x),
        Err(GraphError::ZeroVolume) => Ok(0.0),
        Err(e) => Err(e),
    };
    let inside = [side(&set)?, side(&rest)?];
    Ok((set, inside))
}

/// Named values compared by the branch tests.
pub type Quantities = BTreeMap<String, f64>;

/// Runs the branch tests for one trigger. `None` means no branch applies.
pub fn step(
    g: &Graph,
    state: &CorePartition,
    th: &Thresholds,
    trigger: &Trigger,
) -> Result<Option<(Action, Quantities)>, PartitionError> {
    let i = trigger.part;
    let ell = state.ell();
    let p = &state.parts[i];
    let b = &state.cores[i];
    let mut q = BTreeMap::new();

    // Rename so that S holds at most half of the core's volume.
    let mut s = trigger.set.clone();
    let vol_b = g.volume(b)?;
    let vol_sb = g.volume(&s.intersection(b))?;
    let flip = if 2.0 * vol_sb > vol_b {
        true
    } else if 2.0 * vol_sb == vol_b {
        let other = p.difference(&s);
        other.intersection(b) < s.intersection(b)
    } else {
        false
    };
    if flip {
        s = p.difference(&s);
    }
    let s_b = s.intersection(b);
    let s_b_bar = b.difference(&s_b);
    let s_p = s.difference(b);
    let bound = th.core_bound(ell + 1);
    q.insert("core_bound".into(), bound);

    if !s_b.is_empty() && !s_b_bar.is_empty() {
        let phi_a = g.conductance(&s_b)?;
        let phi_b = g.conductance(&s_b_bar)?;
        q.insert("phi_SB".into(), phi_a);
        q.insert("phi_SB_bar".into(), phi_b);
        if phi_a.max(phi_b) <= bound {
            new_part_guard(ell, th.k)?;
            let action = Action::SplitCoreB {
                part: i,
                kept: s_b,
                new_core: s_b_bar,
            };
            return Ok(Some((action, q)));
        }

        let coupling = 1.0 / (3.0 * th.k as f64);
        let parts_a = g.varphi_parts(&s_b, b)?;
        let parts_b = g.varphi_parts(&s_b_bar, b)?;
        q.insert("coupling_bound".into(), coupling);
        q.insert("varphi_SB".into(), parts_a.ratio().unwrap_or(f64::NAN));
        q.insert("varphi_SB_bar".into(), parts_b.ratio().unwrap_or(f64::NAN));
        if parts_a.at_most(coupling) || parts_b.at_most(coupling) {
            let keep_a = match phi_a.total_cmp(&phi_b) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => g.canonical_cmp(&s_b, &s_b_bar).is_le(),
            };
            let core = if keep_a { s_b } else { s_b_bar };
            return Ok(Some((Action::RefineCore { part: i, core }, q)));
        }
    }

    if !s_p.is_empty() {
        let phi_sp = g.conductance(&s_p)?;
        q.insert("phi_SP".into(), phi_sp);
        if phi_sp <= bound {
            new_part_guard(ell, th.k)?;
            return Ok(Some((Action::SplitCoreP { part: i, moved: s_p }, q)));
        }
    }

    let free = state.free(i);
    if !free.is_empty() {
        let home = g.cut_weight(&free, p)?;
        q.insert("e_free_home".into(), home);
        for j in (0..ell).filter(|&j| j != i) {
            let there = g.cut_weight(&free, &state.cores[j])?;
            if home < there {
                q.insert("e_free_core_j".into(), there);
                let action = Action::FoldPminusB {
                    part: i,
                    into: j,
                    moved: free,
                };
                return Ok(Some((action, q)));
            }
        }
    }

    if !s_p.is_empty() {
        let weights: Vec<f64> = state
            .parts
            .iter()
            .map(|x| g.cut_weight(&s_p, x))
            .collect::<Result<_, _>>()?;
        let into = argmax_other(&weights, i);
        q.insert("e_SP_home".into(), weights[i]);
        q.insert("e_SP_best".into(), weights[into]);
        if weights[i] < weights[into] {
            let action = Action::MoveSP {
                part: i,
                into,
                moved: s_p,
            };
            return Ok(Some((action, q)));
        }
    }
    Ok(None)
}

fn new_part_guard(ell: usize, k: usize) -> Result<(), PartitionError> {
    if ell + 1 >= k {
        Err(PartitionError::Invariant(format!(
            "opening a new core would bring the part count to {} with k = {k}",
            ell + 1
        )))
    } else {
        Ok(())
    }
}

/// Runs the local search to completion.
///
/// Each iteration scans the triggers in order and applies the first branch
/// that fires. A trigger for which no branch applies is logged as a stall
/// and the scan continues; the run stops when no trigger fires or every
/// firing trigger stalls (then `stalled` is set in the report).
pub fn partition_into_expanders(g: &Graph, cfg: &AlgoConfig) -> Result<(CorePartition, ClusteringReport), PartitionError> {
    let th = compute_thresholds_for(g, cfg)?;
    let mut warnings = Vec::new();
    if th.is_degenerate() {
        warnings.push(format!(
            "degenerate thresholds: lambda_{} = {} makes the core bound zero, so no part can be split off",
            cfg.k - 1,
            th.lambda_km1
        ));
    }
    let cap = cfg.iteration_cap(g);
    let mut state = CorePartition::initial(g.n());
    let mut trace = Vec::new();
    let mut iterations = 0usize;

    let stalled = 'outer: loop {
        let mut fired = false;
        for i in 0..state.ell() {
            for kind in [TriggerKind::Fold, TriggerKind::Spectral] {
                let Some(trigger) = trigger_at(g, &state, &th, cfg, i, kind)? else {
                    continue;
                };
                fired = true;
                match step(g, &state, &th, &trigger)? {
                    Some((action, quantities)) => {
                        if iterations >= cap {
                            return Err(PartitionError::CapExceeded {
                                cap,
                                partial: Box::new(PartialRun {
                                    thresholds: th,
                                    state,
                                    iterations,
                                    trace,
                                }),
                            });
                        }
                        iterations += 1;
                        state.apply(&action)?;
                        debug_assert!(state.validate(g.n()).is_ok());
                        trace.push(TraceEvent {
                            iteration: iterations,
                            trigger: Some(trigger),
                            action,
                            quantities,
                        });
                        continue 'outer;
                    }
                    None => trace.push(TraceEvent {
                        iteration: iterations + 1,
                        action: Action::Stall { part: i },
                        trigger: Some(trigger),
                        quantities: BTreeMap::new(),
                    }),
                }
            }
        }
        trace.push(TraceEvent {
            iteration: iterations + 1,
            trigger: None,
            action: Action::Stop,
            quantities: BTreeMap::new(),
        });
        break fired;
    };
    if stalled {
        warnings.push("stopped with a trigger that no branch could act on".into());
    }

    let verification = verify_clustering(g, &state.parts, th.inside_target(), th.phi_out, VerifyMode::Auto, cfg.tol)?;
    let report = ClusteringReport {
        schema: REPORT_SCHEMA,
        config: cfg.clone(),
        thresholds: th,
        warnings,
        ell: state.ell(),
        parts: state.parts.clone(),
        cores: state.cores.clone(),
        iterations,
        iteration_cap: cap,
        stalled,
        verification,
        trace,
    };
    Ok((state, report))
}
