//! Plain-text graph and odds formats.
//!
//! `.ug`: header `vertices N`, then one `u v` line per conventional edge.
//! `.bg`: header `bits N checks M`, then one `bit check` line per edge.
//! In both, `#` starts a comment and blank lines are ignored.

use super::{build_undirected, BipartiteGraph, UndirectedGraph};
use crate::error::{Error, Result};
use std::fmt::Write as _;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn parse_num(word: &str, line: usize) -> Result<usize> {
    word.parse().map_err(|_| Error::Parse { line, message: format!("expected a non-negative integer, found `{word}`") })
}

fn parse_pair(words: &[&str], line: usize) -> Result<(usize, usize)> {
    match words {
        [a, b] => Ok((parse_num(a, line)?, parse_num(b, line)?)),
        _ => Err(Error::Parse { line, message: format!("expected two integers, found {} fields", words.len()) }),
    }
}

pub fn parse_ug(text: &str) -> Result<UndirectedGraph> {
    let mut lines = content_lines(text);
    let n = match lines.next() {
        Some((line, words)) => match words[..] {
            ["vertices", n] => parse_num(n, line)?,
            _ => return Err(Error::Parse { line, message: "expected header `vertices N`".into() }),
        },
        None => return Err(Error::Parse { line: 0, message: "empty graph file".into() }),
    };
    let pairs = lines.map(|(line, words)| parse_pair(&words, line)).collect::<Result<Vec<_>>>()?;
    build_undirected(n, &pairs)
}

/// Writes one line per conjugate pair, taken from the lower edge id.
pub fn write_ug(g: &UndirectedGraph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for (u, v) in g.conventional_edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_bg(text: &str) -> Result<BipartiteGraph> {
    let mut lines = content_lines(text);
    let (bits, checks) = match lines.next() {
        Some((line, words)) => match words[..] {
            ["bits", b, "checks", c] => (parse_num(b, line)?, parse_num(c, line)?),
            _ => return Err(Error::Parse { line, message: "expected header `bits N checks M`".into() }),
        },
        None => return Err(Error::Parse { line: 0, message: "empty graph file".into() }),
    };
    let edges = lines.map(|(line, words)| parse_pair(&words, line)).collect::<Result<Vec<_>>>()?;
    BipartiteGraph::new(bits, checks, &edges)
}

pub fn write_bg(b: &BipartiteGraph) -> String {
    let mut out = format!("bits {} checks {}\n", b.bit_count(), b.check_count());
    for (bit, check) in b.edge_list() {
        let _ = writeln!(out, "{bit} {check}");
    }
    out
}

fn parse_odd(word: &str, line: usize) -> Result<f64> {
    let v: f64 = word.trim().parse().map_err(|_| Error::Parse { line, message: format!("expected a number, found `{word}`") })?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Parse { line, message: format!("odds must be positive and finite, found {v}") });
    }
    Ok(v)
}

/// Odds file: one positive value per line, in bit order.
pub fn parse_odds_file(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(line, words)| match words[..] {
            [w] => parse_odd(w, line),
            _ => Err(Error::Parse { line, message: "expected one value per line".into() }),
        })
        .collect()
}

/// Inline form `0.5,0.5,4.5`.
pub fn parse_odds_inline(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(|w| parse_odd(w, 1)).collect()
}
