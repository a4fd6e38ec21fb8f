//! Fraction-free (Bareiss) elimination over the integers.
//!
//! Every intermediate entry is a minor of the input, so the divisions are
//! exact and no rational arithmetic is needed. Used as an independent route
//! for ranks and determinants of rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

#[derive(Clone, Debug)]
pub struct Bareiss {
    /// Fraction-free row-echelon form.
    pub echelon: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Parity of the row swaps performed.
    pub swaps_odd: bool,
}

impl Bareiss {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Scales each row by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

pub fn eliminate(mut m: Vec<Vec<BigInt>>) -> Bareiss {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps_odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            swaps_odd = !swaps_odd;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Bareiss { echelon: m, pivots, swaps_odd }
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    eliminate(integer_rows(rows)).rank()
}

/// Determinant of a square integer matrix.
pub fn det(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let b = eliminate(m);
    if b.rank() < n {
        return BigInt::zero();
    }
    let d = b.echelon[n - 1][n - 1].clone();
    if b.swaps_odd {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix.
pub fn det_rational(rows: &[Vec<Q>]) -> Q {
    let mut scale = BigInt::one();
    for row in rows {
        scale *= row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    }
    let d = det(integer_rows(rows));
    Q::new(d, scale.abs()) * if scale.is_negative() { -Q::one() } else { Q::one() }
}
