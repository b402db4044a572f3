//! Deterministic graph families and seeded random corpora.
//!
//! Vertex numbering is fixed per family. Random generators draw from
//! `ChaCha8Rng` and make every construction decision with integer
//! comparisons, so a seed yields the same graph on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Attempts before a random generator gives up.
pub const MAX_RETRIES: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("{family}: {what} must be at least {min}, got {got}")]
    TooSmall {
        family: &'static str,
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{family}: {message}")]
    InvalidArgument { family: &'static str, message: String },
    #[error("{family}: no valid graph after {attempts} attempts")]
    RetriesExhausted { family: &'static str, attempts: usize },
    #[error("bad generator spec '{spec}': {message}")]
    Spec { spec: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn at_least(family: &'static str, what: &'static str, got: usize, min: usize) -> Result<(), GenError> {
    if got < min {
        Err(GenError::TooSmall { family, what, min, got })
    } else {
        Ok(())
    }
}

fn probability(family: &'static str, p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::InvalidArgument {
            family,
            message: format!("probability {p} outside [0, 1]"),
        })
    }
}

fn clique_edges(offset: usize, size: usize, out: &mut Vec<(usize, usize, f64)>) {
    for u in 0..size {
        for v in u + 1..size {
            out.push((offset + u, offset + v, 1.0));
        }
    }
}

/// Center 0 with leaves `1..=m`.
pub fn gen_star(m: usize) -> Result<Graph, GenError> {
    at_least("star", "leaf count", m, 1)?;
    let edges: Vec<_> = (1..=m).map(|v| (0, v)).collect();
    Ok(Graph::from_unweighted(m + 1, &edges)?)
}

pub fn gen_cycle(n: usize) -> Result<Graph, GenError> {
    at_least("cycle", "vertex count", n, 3)?;
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_unweighted(n, &edges)?)
}

pub fn gen_path(n: usize) -> Result<Graph, GenError> {
    at_least("path", "vertex count", n, 2)?;
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Ok(Graph::from_unweighted(n, &edges)?)
}

pub fn gen_complete(n: usize) -> Result<Graph, GenError> {
    at_least("complete", "vertex count", n, 2)?;
    let mut edges = Vec::new();
    clique_edges(0, n, &mut edges);
    Ok(Graph::from_edges(n, &edges)?)
}

/// Cliques `C₀..C_k` of `size` vertices, `Cᵢ` on ids `i·size..(i+1)·size`,
/// and one unit edge from vertex `(i−1) mod size` of `C₀` to the first
/// vertex of `Cᵢ`. The `C₀` endpoints are distinct when `size ≥ k`.
pub fn gen_clique_chain(k: usize, size: usize) -> Result<Graph, GenError> {
    at_least("clique_chain", "satellite count", k, 1)?;
    at_least("clique_chain", "clique size", size, 2)?;
    let mut edges = Vec::new();
    for c in 0..=k {
        clique_edges(c * size, size, &mut edges);
    }
    for i in 1..=k {
        edges.push(((i - 1) % size, i * size, 1.0));
    }
    Ok(Graph::from_edges((k + 1) * size, &edges)?)
}

/// Two cliques on `0..size` and `size..2·size` joined by the edge
/// `(size−1, size)` of weight `bridge`.
pub fn gen_dumbbell(size: usize, bridge: f64) -> Result<Graph, GenError> {
    at_least("dumbbell", "clique size", size, 2)?;
    let mut edges = Vec::new();
    clique_edges(0, size, &mut edges);
    clique_edges(size, size, &mut edges);
    edges.push((size - 1, size, bridge));
    Ok(Graph::from_edges(2 * size, &edges)?)
}

/// Two `K₆` on `0..6` and `6..12` with a cross edge `(4, 11)`, and vertex
/// 12 attached to `6`, `7` and `11` of the second clique. Both halves of
/// the natural 2-partition have small conductance, yet vertex 12 sits
/// between them.
pub fn gen_figure1() -> Graph {
    let mut edges = Vec::new();
    clique_edges(0, 6, &mut edges);
    clique_edges(6, 6, &mut edges);
    edges.extend([(4, 11, 1.0), (6, 12, 1.0), (7, 12, 1.0), (11, 12, 1.0)]);
    Graph::from_edges(13, &edges).expect("fixed construction")
}

/// A sample with its ground-truth block labels.
#[derive(Debug, Clone)]
pub struct Planted {
    pub graph: Graph,
    pub labels: Vec<usize>,
}

/// `true` with probability `p`, decided on 53-bit integers.
fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    const SCALE: f64 = (1u64 << 53) as f64;
    let threshold = (p * SCALE) as u64;
    (rng.next_u64() >> 11) < threshold || p >= 1.0
}

/// Stochastic block model: `parts` blocks of `size` vertices, edges
/// inside a block with probability `p_in` and across with `p_out`.
/// Samples with an isolated vertex are redrawn.
pub fn gen_planted(parts: usize, size: usize, p_in: f64, p_out: f64, seed: u64) -> Result<Planted, GenError> {
    const FAMILY: &str = "planted";
    at_least(FAMILY, "block count", parts, 1)?;
    at_least(FAMILY, "block size", size, 1)?;
    at_least(FAMILY, "vertex count", parts * size, 2)?;
    probability(FAMILY, p_in)?;
    probability(FAMILY, p_out)?;
    let n = parts * size;
    let labels: Vec<usize> = (0..n).map(|v| v / size).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let p = if labels[u] == labels[v] { p_in } else { p_out };
                if coin(&mut rng, p) {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(graph) = Graph::from_unweighted(n, &edges) {
            return Ok(Planted { graph, labels });
        }
    }
    Err(GenError::RetriesExhausted {
        family: FAMILY,
        attempts: MAX_RETRIES,
    })
}

/// Erdős–Rényi `G(n, p)`, redrawn until no vertex is isolated.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    Ok(gen_planted(1, n, p, 0.0, seed)
        .map_err(|e| match e {
            GenError::TooSmall { what, min, got, .. } => GenError::TooSmall {
                family: "gnp",
                what,
                min,
                got,
            },
            GenError::InvalidArgument { message, .. } => GenError::InvalidArgument { family: "gnp", message },
            GenError::RetriesExhausted { attempts, .. } => GenError::RetriesExhausted { family: "gnp", attempts },
            other => other,
        })?
        .graph)
}

/// Connected simple `d`-regular graph from the pairing model, rejecting
/// pairings with loops, repeated pairs or more than one component.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    const FAMILY: &str = "regular";
    at_least(FAMILY, "degree", d, 1)?;
    at_least(FAMILY, "vertex count", n, d + 1)?;
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::InvalidArgument {
            family: FAMILY,
            message: format!("n·d = {} must be even", n * d),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..MAX_RETRIES {
        stubs.shuffle(&mut rng);
        let mut pairs = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !pairs.insert((u, v)) {
                continue 'attempt;
            }
        }
        let edges: Vec<_> = pairs.into_iter().collect();
        let g = Graph::from_unweighted(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::RetriesExhausted {
        family: FAMILY,
        attempts: MAX_RETRIES,
    })
}

/// Parsed `name:arg1,arg2[,key=value]` generator description.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Star { m: usize },
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    CliqueChain { k: usize, size: usize },
    Dumbbell { size: usize, bridge: f64 },
    Figure1,
    Planted { parts: usize, size: usize, p_in: f64, p_out: f64, seed: u64 },
    Regular { n: usize, d: usize, seed: u64 },
    Gnp { n: usize, p: f64, seed: u64 },
}

/// A generated graph with labels when the family has them.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub labels: Option<Vec<usize>>,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Generated, GenError> {
        let plain = |graph: Graph| Generated { graph, labels: None };
        Ok(match *self {
            Self::Star { m } => plain(gen_star(m)?),
            Self::Cycle { n } => plain(gen_cycle(n)?),
            Self::Path { n } => plain(gen_path(n)?),
            Self::Complete { n } => plain(gen_complete(n)?),
            Self::CliqueChain { k, size } => plain(gen_clique_chain(k, size)?),
            Self::Dumbbell { size, bridge } => plain(gen_dumbbell(size, bridge)?),
            Self::Figure1 => plain(gen_figure1()),
            Self::Planted {
                parts,
                size,
                p_in,
                p_out,
                seed,
            } => {
                let p = gen_planted(parts, size, p_in, p_out, seed)?;
                Generated {
                    graph: p.graph,
                    labels: Some(p.labels),
                }
            }
            Self::Regular { n, d, seed } => plain(gen_random_regular(n, d, seed)?),
            Self::Gnp { n, p, seed } => plain(gen_gnp(n, p, seed)?),
        })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Star { m } => write!(f, "star:{m}"),
            Self::Cycle { n } => write!(f, "cycle:{n}"),
            Self::Path { n } => write!(f, "path:{n}"),
            Self::Complete { n } => write!(f, "complete:{n}"),
            Self::CliqueChain { k, size } => write!(f, "clique_chain:{k},{size}"),
            Self::Dumbbell { size, bridge } if *bridge == 1.0 => write!(f, "dumbbell:{size}"),
            Self::Dumbbell { size, bridge } => write!(f, "dumbbell:{size},bridge={bridge:?}"),
            Self::Figure1 => write!(f, "figure1"),
            Self::Planted {
                parts,
                size,
                p_in,
                p_out,
                seed,
            } => write!(f, "planted:{parts},{size},{p_in:?},{p_out:?},seed={seed}"),
            Self::Regular { n, d, seed } => write!(f, "regular:{n},{d},seed={seed}"),
            Self::Gnp { n, p, seed } => write!(f, "gnp:{n},{p:?},seed={seed}"),
        }
    }
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |message: String| GenError::Spec {
            spec: spec.to_string(),
            message,
        };
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut positional = Vec::new();
        let mut seed = 0u64;
        let mut bridge = 1.0f64;
        for arg in rest.split(',').map(str::trim).filter(|a| !a.is_empty()) {
            match arg.split_once('=') {
                Some(("seed", v)) => seed = v.parse().map_err(|_| bad(format!("invalid seed '{v}'")))?,
                Some(("bridge", v)) => bridge = v.parse().map_err(|_| bad(format!("invalid bridge weight '{v}'")))?,
                Some((key, _)) => return Err(bad(format!("unknown option '{key}'"))),
                None if positional.len() < 4 => positional.push(arg),
                None => return Err(bad("too many arguments".into())),
            }
        }
        let arity = |want: usize| {
            if positional.len() == want {
                Ok(())
            } else {
                Err(bad(format!("{name} takes {want} argument(s), got {}", positional.len())))
            }
        };
        let int = |i: usize| -> Result<usize, GenError> {
            positional[i]
                .parse()
                .map_err(|_| bad(format!("invalid integer '{}'", positional[i])))
        };
        let real = |i: usize| -> Result<f64, GenError> {
            positional[i]
                .parse()
                .map_err(|_| bad(format!("invalid number '{}'", positional[i])))
        };
        let seeded = |ok: bool| if ok || seed == 0 { Ok(()) } else { Err(bad(format!("{name} takes no seed"))) };
        seeded(matches!(name, "planted" | "regular" | "gnp"))?;
        if bridge != 1.0 && name != "dumbbell" {
            return Err(bad(format!("{name} takes no bridge weight")));
        }
        Ok(match name {
            "star" => {
                arity(1)?;
                Self::Star { m: int(0)? }
            }
            "cycle" => {
                arity(1)?;
                Self::Cycle { n: int(0)? }
            }
            "path" => {
                arity(1)?;
                Self::Path { n: int(0)? }
            }
            "complete" => {
                arity(1)?;
                Self::Complete { n: int(0)? }
            }
            "clique_chain" => {
                arity(2)?;
                Self::CliqueChain {
                    k: int(0)?,
                    size: int(1)?,
                }
            }
            "dumbbell" => {
                arity(1)?;
                Self::Dumbbell { size: int(0)?, bridge }
            }
            "figure1" => {
                arity(0)?;
                Self::Figure1
            }
            "planted" => {
                arity(4)?;
                Self::Planted {
                    parts: int(0)?,
                    size: int(1)?,
                    p_in: real(2)?,
                    p_out: real(3)?,
                    seed,
                }
            }
            "regular" => {
                arity(2)?;
                Self::Regular {
                    n: int(0)?,
                    d: int(1)?,
                    seed,
                }
            }
            "gnp" => {
                arity(2)?;
                Self::Gnp {
                    n: int(0)?,
                    p: real(1)?,
                    seed,
                }
            }
            other => return Err(bad(format!("unknown family '{other}'"))),
        })
    }
}
