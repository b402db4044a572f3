//! End-to-end exact check of the gap guarantee: order-k conductance witnesses,
//! shrunk to cores, grown to a partition, with every promised bound
//! recomputed from scratch.

use serde::Serialize;

use super::cores::{build_cores_reference, home_share_slack, merge_reference, DEFAULT_MOVE_CAP};
use super::subsets::gray_walk;
use super::{budget, inside_conductance_exact, rho_profile, slack, OracleError, RhoProfile, MAX_CORE_N};
use crate::graph::{Graph, VertexSet};
use crate::partition::CorePartition;

/// One numeric comparison `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: f64,
    pub passed: bool,
}

impl Check {
    /// `lhs ≤ rhs` up to rounding slack.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            relation: "<=",
            rhs,
            passed: lhs <= rhs + slack(rhs),
        }
    }

    /// `lhs ≥ rhs` up to rounding slack.
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            relation: ">=",
            rhs,
            passed: lhs >= rhs - slack(rhs),
        }
    }

    /// Strict `lhs > rhs`, no slack.
    pub fn above(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            relation: ">",
            rhs,
            passed: lhs > rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistentialReport {
    pub k: usize,
    pub eps: f64,
    /// `ρ(k+1) > (1+eps)·ρ(k)`; when false nothing else is checked.
    pub gap: Check,
    pub applicable: bool,
    pub rho: RhoProfile,
    pub witnesses: Vec<VertexSet>,
    pub cores: Vec<VertexSet>,
    pub partition: Option<CorePartition>,
    pub checks: Vec<Check>,
}

impl ExistentialReport {
    /// All checks hold. Vacuously true when the gap is absent.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs the full exact pipeline for `k` sets at gap parameter `eps`.
pub fn existential_suite(g: &Graph, k: usize, eps: f64) -> Result<ExistentialReport, OracleError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OracleError::InvalidEpsilon { eps });
    }
    let rho = rho_profile(g, k + 1)?;
    let rho_k = rho.value(k);
    let rho_next = rho.value(k + 1);
    let gap = Check::above("gap", rho_next, (1.0 + eps) * rho_k);
    let witnesses = rho.witness(k).to_vec();
    let mut report = ExistentialReport {
        k,
        eps,
        applicable: gap.passed,
        gap,
        rho,
        witnesses,
        cores: Vec::new(),
        partition: None,
        checks: Vec::new(),
    };
    if !report.applicable {
        return Ok(report);
    }
    let checks = &mut report.checks;
    let kf = k as f64;

    let build = build_cores_reference(g, &report.witnesses, eps)?;
    for (i, (a, b)) in report.witnesses.iter().zip(&build.cores).enumerate() {
        checks.push(Check::at_most(
            format!("core {i}: conductance within its witness"),
            g.conductance(b)?,
            g.conductance(a)?,
        ));
    }
    let worst_rise = build
        .steps
        .iter()
        .map(|s| s.phi_after - s.phi_before)
        .fold(f64::NEG_INFINITY, f64::max);
    if !build.steps.is_empty() {
        checks.push(Check::at_most("core shrinking never raises conductance", worst_rise, 0.0));
    }

    let inside_req = eps * rho_next / 7.0;
    for (i, b) in build.cores.iter().enumerate() {
        let phi_b = g.conductance(b)?;
        checks.push(Check::at_most(format!("core {i}: outside conductance"), phi_b, rho_k));
        if b.len() < 2 {
            continue;
        }
        let coupling = match super::min_varphi_exact(g, b) {
            Ok(m) => m.value,
            Err(OracleError::Graph(crate::graph::GraphError::Indeterminate)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        checks.push(Check::above(format!("core {i}: coupling"), coupling, eps / 3.0));
        let inside = inside_conductance_exact(g, b)?;
        checks.push(Check::at_least(format!("core {i}: inside conductance"), inside.value, inside_req));
        checks.push(Check::at_least(
            format!("core {i}: anchored subsets expand"),
            anchored_margin(g, b, eps)?,
            -1e-9,
        ));
    }

    let merged = merge_reference(g, &build.cores, DEFAULT_MOVE_CAP)?;
    let partition = merged.partition;
    checks.push(Check::at_least(
        "free sets keep a 1/k share at home",
        home_share_slack(g, &partition, k)?,
        0.0,
    ));
    let part_inside_req = eps * rho_next / (14.0 * kf);
    for (i, (p, b)) in partition.parts.iter().zip(&partition.cores).enumerate() {
        let phi_p = g.conductance(p)?;
        checks.push(Check::at_most(
            format!("part {i}: conductance within k times its core"),
            phi_p,
            kf * g.conductance(b)?,
        ));
        checks.push(Check::at_most(format!("part {i}: outside conductance"), phi_p, kf * rho_k));
        if p.len() >= 2 {
            let inside = inside_conductance_exact(g, p)?;
            checks.push(Check::at_least(
                format!("part {i}: inside conductance"),
                inside.value,
                part_inside_req,
            ));
        }
    }
    if k >= 2 {
        checks.extend(gap_chain(&report.rho, k));
    }
    report.cores = build.cores;
    report.partition = Some(partition);
    Ok(report)
}

/// Picks the largest `ℓ < k` with `(1+1/k)·ρ(ℓ) < ρ(ℓ+1)` and checks
/// `ρ(k) ≤ (1+1/k)^{k−ℓ−1}·ρ(ℓ+1) ≤ e·ρ(ℓ+1)`.
pub(crate) fn gap_chain(rho: &RhoProfile, k: usize) -> Vec<Check> {
    let growth = 1.0 + 1.0 / k as f64;
    let Some(ell) = (1..k).rev().find(|&l| growth * rho.value(l) < rho.value(l + 1)) else {
        return vec![Check::above("gap index exists", rho.value(k), 0.0)];
    };
    let middle = growth.powi((k - ell - 1) as i32) * rho.value(ell + 1);
    vec![
        Check::at_most(format!("rho({k}) within geometric growth of rho({})", ell + 1), rho.value(k), middle),
        Check::at_most("geometric growth within e", middle, std::f64::consts::E * rho.value(ell + 1)),
    ]
}

/// Worst value of `e(S, B−S)/vol(S) − (eps/7)·max{φ(S), φ(B−S)}` over
/// `S ⊆ B` with `vol(S) ≤ vol(B)/2` whose two sides both couple at
/// least `eps/3`. Also requires the induced conductance of `S` to be at
/// least `e(S, B−S)/vol(S)`; a violation there is returned as the margin.
fn anchored_margin(g: &Graph, b: &VertexSet, eps: f64) -> Result<f64, OracleError> {
    budget("anchored_margin", b.len(), MAX_CORE_N)?;
    let universe = b.members().to_vec();
    let vol_b = g.volume(b)?;
    let full = (1u64 << universe.len()) - 1;
    let mut worst = f64::INFINITY;
    let mut failure = None;
    gray_walk(universe.len(), |mask, _, _| {
        if mask == full || failure.is_some() {
            return;
        }
        let s = VertexSet::from_mask(&universe, mask);
        let t = b.difference(&s);
        let outcome = (|| -> Result<Option<f64>, OracleError> {
            let vol_s = g.volume(&s)?;
            if 2.0 * vol_s > vol_b {
                return Ok(None);
            }
            let coupled = |x: &VertexSet| match g.varphi_parts(x, b) {
                Ok(parts) => parts.ratio().map(|r| r >= eps / 3.0).unwrap_or(false),
                Err(_) => false,
            };
            if !coupled(&s) || !coupled(&t) {
                return Ok(None);
            }
            let anchored = g.cut_weight(&s, b)? / vol_s;
            let bound = eps / 7.0 * g.conductance(&s)?.max(g.conductance(&t)?);
            let mut margin = anchored - bound;
            if let Ok(induced) = g.conductance_in_induced(b, &s) {
                margin = margin.min(induced - anchored + slack(anchored));
            }
            Ok(Some(margin))
        })();
        match outcome {
            Ok(Some(m)) => worst = worst.min(m),
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(worst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_edges(offset: usize, n: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((offset + u, offset + v));
            }
        }
        edges
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_unweighted(n, &edges).unwrap()
    }

    #[test]
    fn dumbbell_passes_with_two_bells() {
        let mut edges = complete_edges(0, 5);
        edges.extend(complete_edges(5, 5));
        edges.push((4, 5));
        let g = Graph::from_unweighted(10, &edges).unwrap();
        let r = existential_suite(&g, 2, 0.5).unwrap();
        assert!(r.applicable);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let mut cores = r.cores.clone();
        cores.sort();
        assert_eq!(cores, vec![(0..5).collect(), (5..10).collect()]);
    }

    #[test]
    fn star_has_no_gap() {
        let edges: Vec<_> = (1..=6).map(|v| (0, v)).collect();
        let g = Graph::from_unweighted(7, &edges).unwrap();
        let r = existential_suite(&g, 2, 0.5).unwrap();
        assert!(!r.applicable);
        assert!(r.checks.is_empty());
    }

    #[test]
    fn cycle_twelve_three_arcs() {
        let g = cycle(12);
        let r = existential_suite(&g, 3, 0.25).unwrap();
        assert!(r.applicable);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let p = r.partition.unwrap();
        assert_eq!(p.ell(), 3);
        assert!(p.parts.iter().all(|a| a.len() == 4));
    }

    #[test]
    fn gap_chain_on_star_profile() {
        let edges: Vec<_> = (1..=6).map(|v| (0, v)).collect();
        let g = Graph::from_unweighted(7, &edges).unwrap();
        let rho = rho_profile(&g, 4).unwrap();
        let checks = gap_chain(&rho, 4);
        assert!(checks.iter().all(|c| c.passed));
    }
}
