//! Named fixture graphs.
//!
//! Every generator returns an [`UndirectedGraph`] built with
//! [`build_undirected`], so conventional edge `k` becomes directed edges `2k`
//! and `2k + 1`. Vertex numbering for the drawn fixtures:
//!
//! | name | vertices | conventional edges |
//! |------|----------|--------------------|
//! | `example_5_2` | A=0 B=1 C=2 | A-B, A-B, A-C, C-B |
//! | `example_5_3` | drawing label k -> k-1 (11 vertices) | see source |
//! | `fig3_tree` | leaves 0,1 -> 2 -> 3 -> leaves 4,5 | 0-2, 1-2, 2-3, 3-4, 3-5 |
//! | `ts53_girth8` = `fig5_a` | hubs 0,1; middles 2,3,4 | 0-2, 0-3, 0-4, 1-2, 1-3, 1-4 |
//! | `fig5_b` | centre 0; corners 1..4 | 0-1, 0-2, 0-3, 0-4, 1-3, 2-4 |
//! | `fig5_c` | hubs 0,1; paths 0-2-5-1, 0-3-6-1, 0-4-7-1 | |
//! | `ts53_girth6` | apex 0; 1,2 (degree 3); 3,4 | 0-1, 0-2, 1-2, 1-3, 2-4, 3-4 |
//! | `ts62` | 3x2 grid, rows 0-1-2 and 3-4-5 | |
//! | `cover2_dipole3` | 0..3 | 0=1 (double), 0-3, 1-2, 2=3 (double) |
//! | `cover3_girth4` | 0..5 | K_{3,3} on evens/odds |
//! | `cover3_two2cycles` | 0..5 | 0=1, 0-3, 1-2, 2-3, 2-5, 3-4, 4=5 |
//! | `cover3_three2cycles` | 0..5 | 0=1, 0-5, 1-2, 2=3, 3-4, 4=5 |

use super::{build_undirected, UndirectedGraph};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Complete(usize),
    Dipole(usize),
    Cycle(usize),
    CompleteBipartite(usize, usize),
    Petersen,
    Example52,
    Example53,
    Fig3Tree,
    Fig5A,
    Fig5B,
    Fig5C,
    Cover2Dipole3,
    Cover3Girth4,
    Cover3Two2Cycles,
    Cover3Three2Cycles,
    Ts53Girth8,
    Ts53Girth6,
    Ts62,
}

impl Generator {
    /// Every fixed fixture plus a few parametrised members, in a stable order.
    pub fn fixtures() -> Vec<Generator> {
        use Generator::*;
        vec![
            Complete(4),
            Petersen,
            Dipole(3),
            Example52,
            Example53,
            Fig5A,
            Fig5B,
            Fig5C,
            Cover2Dipole3,
            Cover3Girth4,
            Cover3Two2Cycles,
            Cover3Three2Cycles,
            Ts53Girth8,
            Ts53Girth6,
            Ts62,
            CompleteBipartite(3, 3),
            CompleteBipartite(3, 4),
        ]
    }

    /// The three 3-fold covers of the dipole.
    pub fn three_covers() -> [Generator; 3] {
        [Generator::Cover3Girth4, Generator::Cover3Two2Cycles, Generator::Cover3Three2Cycles]
    }

    /// The three trapping-set cores.
    pub fn trapping_cores() -> [Generator; 3] {
        [Generator::Ts53Girth8, Generator::Ts53Girth6, Generator::Ts62]
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Generator::*;
        let name = match self {
            Complete(n) => format!("complete({n})"),
            Dipole(m) => format!("dipole({m})"),
            Cycle(n) => format!("cycle({n})"),
            CompleteBipartite(a, b) => format!("complete_bipartite({a},{b})"),
            Petersen => "petersen".to_string(),
            Example52 => "example_5_2".to_string(),
            Example53 => "example_5_3".to_string(),
            Fig3Tree => "fig3_tree".to_string(),
            Fig5A => "fig5_a".to_string(),
            Fig5B => "fig5_b".to_string(),
            Fig5C => "fig5_c".to_string(),
            Cover2Dipole3 => "cover2_dipole3".to_string(),
            Cover3Girth4 => "cover3_girth4".to_string(),
            Cover3Two2Cycles => "cover3_two2cycles".to_string(),
            Cover3Three2Cycles => "cover3_three2cycles".to_string(),
            Ts53Girth8 => "ts53_girth8".to_string(),
            Ts53Girth6 => "ts53_girth6".to_string(),
            Ts62 => "ts62".to_string(),
        };
        f.pad(&name)
    }
}

fn parse_args(s: &str, prefix: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Generator::*;
        let name = s.trim().to_ascii_lowercase();
        let fixed = match name.as_str() {
            "petersen" => Some(Petersen),
            "example_5_2" => Some(Example52),
            "example_5_3" => Some(Example53),
            "fig3_tree" => Some(Fig3Tree),
            "fig5_a" => Some(Fig5A),
            "fig5_b" => Some(Fig5B),
            "fig5_c" => Some(Fig5C),
            "cover2_dipole3" => Some(Cover2Dipole3),
            "cover3_girth4" => Some(Cover3Girth4),
            "cover3_two2cycles" => Some(Cover3Two2Cycles),
            "cover3_three2cycles" => Some(Cover3Three2Cycles),
            "ts53_girth8" => Some(Ts53Girth8),
            "ts53_girth6" => Some(Ts53Girth6),
            "ts62" => Some(Ts62),
            "triangle" => Some(Complete(3)),
            _ => None,
        };
        if let Some(g) = fixed {
            return Ok(g);
        }
        let unknown = || Error::UnknownGenerator(s.to_string());
        // short forms: k4, dipole3, cycle5
        for (prefix, ctor) in [("k", Complete as fn(usize) -> Generator), ("dipole", Dipole), ("cycle", Cycle)] {
            if let Some(rest) = name.strip_prefix(prefix) {
                if let Ok(n) = rest.parse::<usize>() {
                    return Ok(ctor(n));
                }
            }
        }
        if let Some(a) = parse_args(&name, "complete") {
            return match a[..] {
                [n] => Ok(Complete(n)),
                _ => Err(unknown()),
            };
        }
        if let Some(a) = parse_args(&name, "dipole") {
            return match a[..] {
                [m] => Ok(Dipole(m)),
                _ => Err(unknown()),
            };
        }
        if let Some(a) = parse_args(&name, "cycle") {
            return match a[..] {
                [n] => Ok(Cycle(n)),
                _ => Err(unknown()),
            };
        }
        if let Some(a) = parse_args(&name, "complete_bipartite") {
            return match a[..] {
                [p, q] => Ok(CompleteBipartite(p, q)),
                _ => Err(unknown()),
            };
        }
        Err(unknown())
    }
}

/// Builds the named fixture.
pub fn generate(gen: &Generator) -> Result<UndirectedGraph> {
    use Generator::*;
    let (n, pairs): (usize, Vec<(usize, usize)>) = match *gen {
        Complete(n) => (n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()),
        Dipole(m) => (2, vec![(0, 1); m]),
        Cycle(n) => {
            if n == 0 {
                return Err(Error::UnknownGenerator("cycle(0)".into()));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        CompleteBipartite(a, b) => (a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect()),
        Petersen => {
            let mut p = Vec::new();
            for i in 0..5 {
                p.push((i, (i + 1) % 5));
            }
            for i in 0..5 {
                p.push((i, i + 5));
            }
            for i in 0..5 {
                p.push((5 + i, 5 + (i + 2) % 5));
            }
            (10, p)
        }
        Example52 => (3, vec![(0, 1), (0, 1), (0, 2), (2, 1)]),
        Example53 => {
            let labelled = [
                (5, 4),
                (5, 1),
                (7, 4),
                (7, 3),
                (6, 4),
                (6, 2),
                (3, 1),
                (3, 2),
                (8, 1),
                (8, 2),
                (9, 1),
                (9, 2),
                (10, 1),
                (10, 2),
                (11, 2),
                (11, 1),
            ];
            (11, labelled.iter().map(|&(a, b)| (a - 1, b - 1)).collect())
        }
        Fig3Tree => (6, vec![(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]),
        Fig5A | Ts53Girth8 => (5, vec![(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
        Fig5B => (5, vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (2, 4)]),
        Fig5C => (8, vec![(0, 2), (0, 3), (0, 4), (2, 5), (3, 6), (4, 7), (1, 5), (1, 6), (1, 7)]),
        Cover2Dipole3 => (4, vec![(0, 1), (0, 1), (0, 3), (1, 2), (2, 3), (2, 3)]),
        Cover3Girth4 => (6, vec![(0, 1), (0, 3), (0, 5), (1, 2), (1, 4), (2, 3), (2, 5), (3, 4), (4, 5)]),
        Cover3Two2Cycles => (6, vec![(0, 1), (0, 1), (0, 3), (1, 2), (2, 3), (2, 5), (3, 4), (4, 5), (4, 5)]),
        Cover3Three2Cycles => (6, vec![(0, 1), (0, 1), (0, 5), (1, 2), (2, 3), (2, 3), (3, 4), (4, 5), (4, 5)]),
        Ts53Girth6 => (5, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4)]),
        Ts62 => (6, vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]),
    };
    build_undirected(n, &pairs)
}

/// Edge order used in the hand-worked matrix displays for a fixture, as a
/// permutation suitable for [`UndirectedGraph::permute_edges`].
///
/// * `example_5_2`: `1, 2, 3, 4, 1̄, 2̄, 3̄, 4̄`.
/// * `ts53_girth8`: `1, 2, 3, 1̄, 2̄, 3̄, 4, 5, 6, 4̄, 5̄, 6̄` with edges 1-3
///   leaving hub 0 and edges 4-6 leaving hub 1.
pub fn display_edge_order(gen: &Generator) -> Option<Vec<usize>> {
    match gen {
        Generator::Example52 => Some(vec![0, 2, 4, 6, 1, 3, 5, 7]),
        Generator::Ts53Girth8 | Generator::Fig5A => Some(vec![0, 2, 4, 1, 3, 5, 6, 8, 10, 7, 9, 11]),
        _ => None,
    }
}
