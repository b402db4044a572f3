//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m [flag]
//! u v [w]
//! ```
//!
//! The header gives the vertex and edge counts; the optional flag is `1`
//! for a weighted document and `0` for an unweighted one. Weights default
//! to 1 when the flag is absent or `0`, and are required when it is `1`.
//! Ids are 0-based; blank lines and text after `#` are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("empty document: expected a header line 'n m [weighted]'")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header declares {declared} edges but the document has {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("vertex {vertex} has no incident edge (header declares {n} vertices)")]
    IsolatedVertex { vertex: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, what: &str, token: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} '{token}'")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&tokens.len()) {
        return Err(syntax(hline, "header must be 'n m [weighted]'"));
    }
    let n: usize = number(hline, "vertex count", tokens[0])?;
    let m: usize = number(hline, "edge count", tokens[1])?;
    let weighted = match tokens.get(2) {
        None => None,
        Some(&"0") => Some(false),
        Some(&"1") => Some(true),
        Some(t) => return Err(syntax(hline, format!("weighted flag must be 0 or 1, got '{t}'"))),
    };
    if n == 0 {
        return Err(syntax(hline, "vertex count must be positive"));
    }

    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let w = match (tokens.len(), weighted) {
            (2, Some(true)) => return Err(syntax(line, "weighted document requires 'u v w'")),
            (2, _) => 1.0,
            (3, _) => number::<f64>(line, "weight", tokens[2])?,
            _ => return Err(syntax(line, "expected 'u v [w]'")),
        };
        let u: usize = number(line, "vertex", tokens[0])?;
        let v: usize = number(line, "vertex", tokens[1])?;
        for x in [u, v] {
            if x >= n {
                return Err(syntax(line, format!("vertex {x} out of range for n = {n}")));
            }
        }
        if u == v {
            return Err(syntax(line, format!("self-loop at vertex {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(syntax(line, format!("weight {w} must be finite and positive")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(syntax(line, format!("duplicate edge ({}, {})", key.0, key.1)));
        }
        edges.push((key.0, key.1, w));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    let mut touched = vec![false; n];
    for &(u, v, _) in &edges {
        touched[u] = true;
        touched[v] = true;
    }
    if let Some(vertex) = touched.iter().position(|t| !t) {
        return Err(ParseError::IsolatedVertex { vertex, n });
    }
    Ok(Graph::from_edges(n, &edges)?)
}

/// Integers print as integers, anything else with 17 significant digits,
/// which reads back to the same `f64`.
pub fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w:.16e}")
    }
}

/// Canonical document: flag present, edges sorted with `u < v`, weights
/// always written.
pub fn write_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::new();
    let flag = if g.is_unweighted() { 0 } else { 1 };
    let _ = writeln!(out, "{} {} {flag}", g.n(), edges.len());
    for (u, v, w) in edges {
        let _ = writeln!(out, "{u} {v} {}", format_weight(w));
    }
    out
}
