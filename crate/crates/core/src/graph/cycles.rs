use super::flow::gcd;
use super::UndirectedGraph;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Multiset of cycle lengths: length -> number of cycles of that length.
///
/// A cycle is a closed walk counted up to rotation of its starting point, so
/// a triangle has exactly two 3-cycles (one per orientation).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleCounts {
    counts: BTreeMap<usize, BigUint>,
}

impl CycleCounts {
    pub(crate) fn from_map(mut counts: BTreeMap<usize, BigUint>) -> Self {
        counts.retain(|_, c| !c.is_zero());
        Self { counts }
    }

    pub fn count(&self, len: usize) -> BigUint {
        self.counts.get(&len).cloned().unwrap_or_default()
    }

    /// Lengths that occur at least once, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().map(|(&k, v)| (k, v))
    }

    /// Gcd of all occurring lengths; `None` when there are no cycles.
    pub fn length_gcd(&self) -> Option<usize> {
        let g = self.counts.keys().fold(0, |acc, &l| gcd(acc, l));
        (g > 0).then_some(g)
    }

    /// Restricts to lengths `<= max_len`.
    pub fn truncated(&self, max_len: usize) -> Self {
        Self::from_map(self.counts.range(..=max_len).map(|(&k, v)| (k, v.clone())).collect())
    }
}

/// Counts completely admissible cycles of `g` with length up to `max_len`.
///
/// Closed non-backtracking walks are counted per length with a transfer
/// recursion over the last edge, then reduced to rotation classes with
/// Burnside's lemma.
pub fn enumerate_admissible_cycles(g: &UndirectedGraph, max_len: usize) -> CycleCounts {
    let walks = closed_walk_counts(g, max_len);
    let mut counts = BTreeMap::new();
    for n in 1..=max_len {
        let mut total = BigUint::zero();
        for d in divisors(n) {
            total += &walks[d] * BigUint::from(euler_phi(n / d));
        }
        let classes = total / BigUint::from(n);
        counts.insert(n, classes);
    }
    CycleCounts::from_map(counts)
}

/// `walks[n]` = number of completely admissible closed walks of length `n`
/// with a distinguished starting edge.
fn closed_walk_counts(g: &UndirectedGraph, max_len: usize) -> Vec<BigUint> {
    let m = g.edge_count();
    let out = g.out_edges();
    let mut walks = vec![BigUint::zero(); max_len + 1];
    if max_len == 0 {
        return walks;
    }
    for first in 0..m {
        let mut cur = vec![BigUint::zero(); m];
        cur[first] = BigUint::from(1u32);
        for (len, closing) in walks.iter_mut().enumerate().skip(1) {
            // cur[e] = number of admissible walks first..e of `len` edges
            for (last, ways) in cur.iter().enumerate() {
                if ways.is_zero() {
                    continue;
                }
                if g.terminus(last) == g.source(first) && first != g.conj(last) {
                    *closing += ways;
                }
            }
            if len == max_len {
                break;
            }
            let mut next = vec![BigUint::zero(); m];
            for (last, ways) in cur.iter().enumerate() {
                if ways.is_zero() {
                    continue;
                }
                for &f in &out[g.terminus(last)] {
                    if f != g.conj(last) {
                        next[f] += ways;
                    }
                }
            }
            cur = next;
        }
    }
    walks
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&k| gcd(k, n) == 1).count()
}

impl std::fmt::Display for CycleCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(len, c)| match c.to_u64() {
                Some(v) => format!("{len}:{v}"),
                None => format!("{len}:{c}"),
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
