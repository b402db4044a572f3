use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("{parts} parts but {cores} cores")]
    LengthMismatch { parts: usize, cores: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("vertex {vertex} lies in more than one part")]
    Overlap { vertex: usize },
    #[error("vertex {vertex} is not covered by any part")]
    Uncovered { vertex: usize },
    #[error("core {index} is empty")]
    EmptyCore { index: usize },
    #[error("vertex {vertex} of core {index} is outside its part")]
    CoreOutsidePart { index: usize, vertex: usize },
    #[error("action refers to part {index} but only {ell} exist")]
    NoSuchPart { index: usize, ell: usize },
    #[error("action is inconsistent with the current state: {0}")]
    BadAction(&'static str),
}

/// Parts `P₁..P_ℓ` of `V` with cores `Bᵢ ⊆ Pᵢ`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorePartition {
    pub parts: Vec<VertexSet>,
    pub cores: Vec<VertexSet>,
}

impl CorePartition {
    /// `ℓ = 1`, `P₁ = B₁ = V`.
    pub fn initial(n: usize) -> Self {
        Self {
            parts: vec![VertexSet::full(n)],
            cores: vec![VertexSet::full(n)],
        }
    }

    pub fn ell(&self) -> usize {
        self.parts.len()
    }

    /// `Pᵢ − Bᵢ`
    pub fn free(&self, i: usize) -> VertexSet {
        self.parts[i].difference(&self.cores[i])
    }

    /// Checks that the parts partition `0..n`, cores are nonempty and each
    /// core sits inside its part (core disjointness follows).
    pub fn validate(&self, n: usize) -> Result<(), StateError> {
        if self.parts.len() != self.cores.len() {
            return Err(StateError::LengthMismatch {
                parts: self.parts.len(),
                cores: self.cores.len(),
            });
        }
        let mut owner = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                if v >= n {
                    return Err(StateError::InvalidVertex { vertex: v, n });
                }
                if owner[v] != usize::MAX {
                    return Err(StateError::Overlap { vertex: v });
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(StateError::Uncovered { vertex: v });
        }
        for (i, b) in self.cores.iter().enumerate() {
            if b.is_empty() {
                return Err(StateError::EmptyCore { index: i });
            }
            if let Some(v) = b.iter().find(|&v| v >= n || owner[v] != i) {
                return Err(StateError::CoreOutsidePart { index: i, vertex: v });
            }
        }
        Ok(())
    }

    /// `owner[v]` = index of the part holding `v`.
    pub fn owners(&self, n: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                owner[v] = i;
            }
        }
        owner
    }

    /// `Σ_{i<j} e(Pᵢ, Pⱼ)`, the total weight of edges between parts.
    pub fn crossing_weight(&self, g: &Graph) -> f64 {
        let owner = self.owners(g.n());
        let mut total = 0.0;
        for u in 0..g.n() {
            for (v, w) in g.neighbors(u) {
                if u < v && owner[u] != owner[v] {
                    total += w;
                }
            }
        }
        total
    }

    pub fn apply(&mut self, action: &Action) -> Result<(), StateError> {
        let ell = self.ell();
        let check = |i: usize| {
            if i < ell {
                Ok(())
            } else {
                Err(StateError::NoSuchPart { index: i, ell })
            }
        };
        match action {
            Action::SplitCoreB { part, kept, new_core } => {
                check(*part)?;
                let b = &self.cores[*part];
                if kept.is_empty() || new_core.is_empty() || kept.union(new_core) != *b || !kept.is_disjoint(new_core) {
                    return Err(StateError::BadAction("core split must divide the core"));
                }
                self.cores[*part] = kept.clone();
                self.parts[*part] = self.parts[*part].difference(new_core);
                self.parts.push(new_core.clone());
                self.cores.push(new_core.clone());
            }
            Action::RefineCore { part, core } => {
                check(*part)?;
                if core.is_empty() || !core.is_subset(&self.cores[*part]) || core.len() == self.cores[*part].len() {
                    return Err(StateError::BadAction("refined core must be a strict subset"));
                }
                self.cores[*part] = core.clone();
            }
            Action::SplitCoreP { part, moved } => {
                check(*part)?;
                if moved.is_empty() || !moved.is_subset(&self.free(*part)) {
                    return Err(StateError::BadAction("new part must come from outside the core"));
                }
                self.parts[*part] = self.parts[*part].difference(moved);
                self.parts.push(moved.clone());
                self.cores.push(moved.clone());
            }
            Action::FoldPminusB { part, into, moved } => {
                check(*part)?;
                check(*into)?;
                if part == into || moved.is_empty() || *moved != self.free(*part) {
                    return Err(StateError::BadAction("fold must move the whole free set"));
                }
                self.parts[*into] = self.parts[*into].union(moved);
                self.parts[*part] = self.cores[*part].clone();
            }
            Action::MoveSP { part, into, moved } => {
                check(*part)?;
                check(*into)?;
                if part == into || moved.is_empty() || !moved.is_subset(&self.free(*part)) {
                    return Err(StateError::BadAction("moved set must come from outside the core"));
                }
                self.parts[*part] = self.parts[*part].difference(moved);
                self.parts[*into] = self.parts[*into].union(moved);
            }
            Action::Stall { part } => check(*part)?,
            Action::Stop => {}
        }
        Ok(())
    }
}

/// One decision of the local search. `part` and `into` are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action")]
pub enum Action {
    /// Both halves of the core are sparse: the core keeps `kept`, and
    /// `new_core` becomes a new part with itself as core.
    #[serde(rename = "split-core-B")]
    SplitCoreB {
        part: usize,
        kept: VertexSet,
        new_core: VertexSet,
    },
    #[serde(rename = "refine-core")]
    RefineCore { part: usize, core: VertexSet },
    /// The non-core side of the cut becomes a new part and core.
    #[serde(rename = "split-core-P")]
    SplitCoreP { part: usize, moved: VertexSet },
    #[serde(rename = "fold-PminusB")]
    FoldPminusB {
        part: usize,
        into: usize,
        moved: VertexSet,
    },
    #[serde(rename = "move-SP")]
    MoveSP {
        part: usize,
        into: usize,
        moved: VertexSet,
    },
    /// A trigger fired but no branch applied; the scan moves on.
    #[serde(rename = "stall")]
    Stall { part: usize },
    #[serde(rename = "stop")]
    Stop,
}

impl Action {
    pub fn tag(&self) -> &'static str {
        match self {
            Action::SplitCoreB { .. } => "split-core-B",
            Action::RefineCore { .. } => "refine-core",
            Action::SplitCoreP { .. } => "split-core-P",
            Action::FoldPminusB { .. } => "fold-PminusB",
            Action::MoveSP { .. } => "move-SP",
            Action::Stall { .. } => "stall",
            Action::Stop => "stop",
        }
    }

    /// Whether the action changes some core.
    pub fn touches_cores(&self) -> bool {
        matches!(
            self,
            Action::SplitCoreB { .. } | Action::RefineCore { .. } | Action::SplitCoreP { .. }
        )
    }

    /// Whether the action only moves vertices between existing parts.
    pub fn is_transfer(&self) -> bool {
        matches!(self, Action::FoldPminusB { .. } | Action::MoveSP { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_is_valid() {
        let s = CorePartition::initial(5);
        assert_eq!(s.ell(), 1);
        s.validate(5).unwrap();
        assert!(s.free(0).is_empty());
    }

    #[test]
    fn validation_errors() {
        let s = CorePartition {
            parts: vec![[0, 1].into(), [1, 2].into()],
            cores: vec![[0].into(), [2].into()],
        };
        assert_eq!(s.validate(3), Err(StateError::Overlap { vertex: 1 }));
        let s = CorePartition {
            parts: vec![[0, 1].into()],
            cores: vec![[0].into()],
        };
        assert_eq!(s.validate(3), Err(StateError::Uncovered { vertex: 2 }));
        let s = CorePartition {
            parts: vec![[0, 1].into(), [2].into()],
            cores: vec![[2].into(), [2].into()],
        };
        assert_eq!(s.validate(3), Err(StateError::CoreOutsidePart { index: 0, vertex: 2 }));
        let s = CorePartition {
            parts: vec![[0, 1, 2].into()],
            cores: vec![VertexSet::new()],
        };
        assert_eq!(s.validate(3), Err(StateError::EmptyCore { index: 0 }));
    }

    #[test]
    fn actions_keep_invariants() {
        let mut s = CorePartition::initial(6);
        s.apply(&Action::SplitCoreB {
            part: 0,
            kept: [0, 1, 2, 3].into(),
            new_core: [4, 5].into(),
        })
        .unwrap();
        s.validate(6).unwrap();
        s.apply(&Action::RefineCore { part: 0, core: [0, 1].into() }).unwrap();
        s.validate(6).unwrap();
        assert_eq!(s.free(0), [2, 3].into());
        s.apply(&Action::MoveSP { part: 0, into: 1, moved: [3].into() }).unwrap();
        s.validate(6).unwrap();
        s.apply(&Action::SplitCoreP { part: 0, moved: [2].into() }).unwrap();
        s.validate(6).unwrap();
        assert_eq!(s.ell(), 3);
        s.apply(&Action::RefineCore { part: 1, core: [4, 5].into() }).unwrap_err();
        s.apply(&Action::RefineCore { part: 1, core: [4].into() }).unwrap();
        s.apply(&Action::FoldPminusB { part: 1, into: 2, moved: [3, 5].into() }).unwrap();
        s.validate(6).unwrap();
        assert_eq!(s.parts, vec![[0, 1].into(), [4].into(), [2, 3, 5].into()]);
    }

    #[test]
    fn crossing_weight_counts_each_edge_once() {
        let g = Graph::from_unweighted(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = CorePartition {
            parts: vec![[0, 1].into(), [2, 3].into()],
            cores: vec![[0].into(), [3].into()],
        };
        assert_eq!(s.crossing_weight(&g), 1.0);
    }

    #[test]
    fn action_tags_serialize() {
        let a = Action::FoldPminusB { part: 0, into: 1, moved: [2].into() };
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"action\":\"fold-PminusB\""));
        let back: Action = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
