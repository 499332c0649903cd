use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Exponents of the edge messages: `x_e = prod_l u_l^{A[e][l]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: Vec<Vec<BigUint>>,
}

impl ExponentMatrix {
    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn row(&self, e: usize) -> &[BigUint] {
        &self.rows[e]
    }

    pub fn get(&self, e: usize, bit: usize) -> &BigUint {
        &self.rows[e][bit]
    }

    /// `<a_e, log u>` in floating point.
    pub fn log_message(&self, e: usize, log_u: &[f64]) -> f64 {
        self.rows[e].iter().zip(log_u).map(|(a, l)| a.to_f64().unwrap_or(f64::INFINITY) * l).sum()
    }
}

/// Exponent recursion for degree-2-check graphs: edge `e` at bit `l` collects
/// `delta_l` plus the previous exponents of the partners of every other edge
/// at `l`. After `t` rounds this is `(I + K + ... + K^{t-1}) Lambda`.
pub fn local_sum_run(b: &BipartiteGraph, t: usize) -> Result<ExponentMatrix> {
    if let Some((check, degree)) = b.first_bad_check() {
        return Err(Error::CheckDegree { check, degree });
    }
    if t == 0 {
        return Err(Error::InvalidInput("local sum needs t >= 1".into()));
    }
    let n = b.edge_count();
    let bits = b.bit_count();
    let mut partner = vec![0; n];
    for c in 0..b.check_count() {
        let at = b.edges_at_check(c);
        partner[at[0]] = at[1];
        partner[at[1]] = at[0];
    }
    let mut a = vec![vec![BigUint::zero(); bits]; n];
    for _ in 0..t {
        let mut next = vec![vec![BigUint::zero(); bits]; n];
        for (e, row) in next.iter_mut().enumerate() {
            let bit = b.bit_of(e);
            row[bit] += 1u32;
            for &f in b.edges_at_bit(bit) {
                if f != e {
                    for (dst, src) in row.iter_mut().zip(&a[partner[f]]) {
                        *dst += src;
                    }
                }
            }
        }
        a = next;
    }
    Ok(ExponentMatrix { rows: a })
}
