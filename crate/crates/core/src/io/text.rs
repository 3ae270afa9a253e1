//! Line-oriented text files: permutations and solutions.
//!
//! Permutation files hold one permutation per line as whitespace-separated
//! 0-based customer indices; blank lines and `#` comments are skipped.
//!
//! Solution files hold one node token per line (`D` for the depot, `C<i>` for
//! customer `i`, `S<j>` for station `j`, all 0-based) followed by a
//! `distance=<value>` line.

use thiserror::Error;

use crate::model::{ModelError, NodeId, Permutation, Solution};

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("line {line}: bad token `{token}`")]
    Token { line: usize, token: String },
    #[error("line {line}: {source}")]
    Permutation { line: usize, source: ModelError },
    #[error("solution file has no `distance=` line")]
    MissingDistance,
}

pub fn parse_permutations(text: &str, n: usize) -> Result<Vec<Permutation>, TextError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let order = body
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| TextError::Token {
                    line,
                    token: t.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Permutation::new(order, n).map_err(|source| TextError::Permutation { line, source })?);
    }
    Ok(out)
}

pub fn emit_permutations(perms: &[Permutation]) -> String {
    let mut s = String::new();
    for p in perms {
        let line: Vec<String> = p.order().iter().map(|c| c.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn emit_solution(solution: &Solution) -> String {
    let mut s = String::new();
    for node in &solution.sequence {
        s.push_str(&node.to_string());
        s.push('\n');
    }
    s.push_str(&format!("distance={}\n", solution.total_distance));
    s
}

pub fn parse_solution(text: &str) -> Result<Solution, TextError> {
    let mut sequence = Vec::new();
    let mut distance = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tok = raw.trim();
        if tok.is_empty() {
            continue;
        }
        let bad = || TextError::Token {
            line,
            token: tok.to_string(),
        };
        if let Some(v) = tok.strip_prefix("distance=") {
            distance = Some(v.parse::<f64>().map_err(|_| bad())?);
            continue;
        }
        let node = match tok.split_at(1) {
            ("D", "") => NodeId::Depot,
            ("C", i) => NodeId::Customer(i.parse().map_err(|_| bad())?),
            ("S", j) => NodeId::Station(j.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        sequence.push(node);
    }
    Ok(Solution {
        sequence,
        total_distance: distance.ok_or(TextError::MissingDistance)?,
    })
}
