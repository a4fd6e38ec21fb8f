use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{feasible_point, primitive_integer_vector, Inequality, Matrix};
use crate::polyring::{sym_positions, SymMatrix, VectorFieldJet};
use crate::scalar::{q, Scalar};
use crate::{Sym, Q};

/// Weights `λ` of the variables and quasi-degrees `δ` of the rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    pub lambda: Vec<i64>,
    pub delta: Vec<i64>,
}

impl WeightSystem {
    pub fn new(lambda: Vec<i64>, delta: Vec<i64>) -> Self {
        WeightSystem { lambda, delta }
    }

    pub fn is_well_formed(&self) -> bool {
        self.lambda.iter().all(|&l| l >= 0) && self.lambda.iter().sum::<i64>() > 0
    }

    pub fn total_weight(&self) -> i64 {
        self.lambda.iter().sum()
    }

    /// `E_λ = Σ λᵢ xᵢ ∂/∂xᵢ`.
    pub fn euler<S: Scalar>(&self) -> VectorFieldJet<S> {
        VectorFieldJet::euler(&self.lambda)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda={:?} delta={:?}", self.lambda, self.delta)
    }
}

fn shapes_match<S: Scalar>(a: &SymMatrix<S>, w: &WeightSystem) -> bool {
    w.lambda.len() == a.nvars() && w.delta.len() == a.n() && w.is_well_formed()
}

/// Every monomial `x^α` of entry `(i, j)` has `2⟨λ, α⟩ = δᵢ + δⱼ`.
pub fn qh_check_monomials<S: Scalar>(a: &SymMatrix<S>, w: &WeightSystem) -> bool {
    shapes_match(a, w)
        && sym_positions(a.n()).into_iter().all(|(i, j)| {
            let target = w.delta[i] + w.delta[j];
            a.get(i, j).terms().all(|(m, _)| 2 * m.weighted_degree(&w.lambda) == target)
        })
}

/// `dA(E_λ) = ½diag(δ) A + A ½diag(δ)`.
pub fn qh_check_euler<S: Scalar>(a: &SymMatrix<S>, w: &WeightSystem) -> bool {
    if !shapes_match(a, w) {
        return false;
    }
    let e = w.euler::<S>();
    let lhs = a.differential(&e);
    let two = S::from_i64(2);
    let rhs = SymMatrix::from_upper(
        a.n(),
        a.nvars(),
        sym_positions(a.n())
            .into_iter()
            .map(|(i, j)| a.get(i, j).scale(&(S::from_i64(w.delta[i] + w.delta[j]) / two.clone())))
            .collect(),
    )
    .expect("sizes match");
    lhs == rhs
}

/// Symmetric quasi-homogeneity of `A` itself with the given weights.
pub fn qh_check<S: Scalar>(a: &SymMatrix<S>, w: &WeightSystem) -> bool {
    let by_monomials = qh_check_monomials(a, w);
    debug_assert_eq!(by_monomials, qh_check_euler(a, w));
    by_monomials
}

/// Rows `2⟨λ,α⟩ − δᵢ − δⱼ = 0` over the unknowns `(λ, δ)`.
fn equations(a: &Sym) -> Vec<Vec<Q>> {
    let (r, n) = (a.nvars(), a.n());
    let mut rows = BTreeSet::new();
    for (i, j) in sym_positions(n) {
        for (m, _) in a.get(i, j).terms() {
            let mut row = vec![0i64; r + n];
            for (k, &e) in m.exponents().iter().enumerate() {
                row[k] = 2 * e as i64;
            }
            row[r + i] -= 1;
            row[r + j] -= 1;
            rows.insert(row);
        }
    }
    rows.into_iter().map(|row| row.into_iter().map(q).collect()).collect()
}

/// Non-negative integer quasi-degrees completing `λ` for `A`, if any.
pub fn quasi_degrees(a: &Sym, lambda: &[i64]) -> Option<Vec<i64>> {
    let n = a.n();
    let mut rows: BTreeSet<(usize, usize, i64)> = BTreeSet::new();
    for (i, j) in sym_positions(n) {
        for (m, _) in a.get(i, j).terms() {
            rows.insert((i, j, 2 * m.weighted_degree(lambda)));
        }
    }
    let bound = rows.iter().map(|r| r.2).max().unwrap_or(0).max(0);
    let aug: Vec<Vec<Q>> = rows
        .iter()
        .map(|&(i, j, rhs)| {
            let mut row = vec![q(0); n + 1];
            row[i] += q(1);
            row[j] += q(1);
            row[n] = q(rhs);
            row
        })
        .collect();
    let (red, pivots) = if aug.is_empty() {
        (Matrix::zeros(0, n + 1), Vec::new())
    } else {
        let r = Matrix::from_rows(aug).rref();
        (r.matrix, r.pivots)
    };
    if pivots.contains(&n) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut assignment = vec![0i64; free.len()];
    loop {
        let mut delta = vec![Q::zero(); n];
        for (k, &f) in free.iter().enumerate() {
            delta[f] = q(assignment[k]);
        }
        for (row, &p) in pivots.iter().enumerate() {
            let mut v = red[(row, n)].clone();
            for &f in &free {
                v -= &red[(row, f)] * &delta[f];
            }
            delta[p] = v;
        }
        if delta.iter().all(|d| d.is_integer() && !d.is_negative()) {
            return Some(delta.iter().map(|d| d.to_integer().to_i64().expect("small quasi-degree")).collect());
        }
        // next assignment in 0..=bound per free variable
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return None;
            }
            assignment[k] += 1;
            if assignment[k] <= bound {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// Compositions of `total` into `parts` parts, each at least `min`, in
/// lexicographic order.
fn compositions(total: i64, parts: usize, min: i64, prefix: &mut Vec<i64>, out: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if parts == 1 {
        if total >= min {
            prefix.push(total);
            let stop = out(prefix);
            prefix.pop();
            return stop;
        }
        return false;
    }
    let mut first = min;
    while first + min * (parts as i64 - 1) <= total {
        prefix.push(first);
        let stop = compositions(total - first, parts - 1, min, prefix, out);
        prefix.pop();
        if stop {
            return true;
        }
        first += 1;
    }
    false
}

/// Weights making `A` (as given, with `X = I`) symmetrically
/// quasi-homogeneous. Strictly positive weights are preferred; among those
/// the smallest total weight, then the lexicographically smallest `λ`.
/// `None` means no weights exist in these coordinates.
pub fn qh_find_diagonal(a: &Sym) -> Option<WeightSystem> {
    let (r, n) = (a.nvars(), a.n());
    let eqs = equations(a);
    let basis = if eqs.is_empty() {
        Matrix::<Q>::identity(r + n).to_rows()
    } else {
        Matrix::from_rows(eqs).nullspace()
    };
    let k = basis.len();
    let coord = |idx: usize| -> Vec<Q> { basis.iter().map(|b| b[idx].clone()).collect() };
    for positive in [true, false] {
        let mut system = Vec::new();
        for i in 0..r {
            system.push(Inequality::new(coord(i), q(if positive { 1 } else { 0 })));
        }
        for j in 0..n {
            system.push(Inequality::new(coord(r + j), q(0)));
        }
        if !positive {
            let total = (0..k).map(|m| (0..r).map(|i| basis[m][i].clone()).sum()).collect();
            system.push(Inequality::new(total, q(1)));
        }
        let Some(t) = feasible_point(&system, k) else { continue };
        let point: Vec<Q> = (0..r + n).map(|idx| coord(idx).iter().zip(&t).map(|(x, y)| x * y).sum()).collect();
        let ints = primitive_integer_vector(&point);
        let cap: i64 = ints[..r].iter().map(|x| x.to_i64().expect("small weight")).sum();
        let min = if positive { 1 } else { 0 };
        for total in 1..=cap {
            let mut found = None;
            compositions(total, r, min, &mut Vec::new(), &mut |lambda| {
                if let Some(delta) = quasi_degrees(a, lambda) {
                    found = Some(WeightSystem::new(lambda.to_vec(), delta));
                    true
                } else {
                    false
                }
            });
            if let Some(w) = found {
                debug_assert!(qh_check(a, &w));
                return Some(w);
            }
        }
        unreachable!("the feasible point itself has total weight {cap}");
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[&str]]) -> Sym {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    fn w(l: &[i64], d: &[i64]) -> WeightSystem {
        WeightSystem::new(l.to_vec(), d.to_vec())
    }

    #[test]
    fn checks_agree() {
        let a = sym(&[&["x1", "x2^2"], &["x1^2"]]);
        assert!(qh_check(&a, &w(&[4, 3], &[4, 8])));
        assert!(qh_check_euler(&a, &w(&[4, 3], &[4, 8])));
        assert!(!qh_check(&sym(&[&["x1", "0"], &["x2"]]), &w(&[1, 2], &[2, 2])));
        assert!(!qh_check_euler(&sym(&[&["x1", "0"], &["x2"]]), &w(&[1, 2], &[2, 2])));
        assert!(qh_check(&sym(&[&["x1", "x2^2"], &["x1*x2"]]), &w(&[3, 2], &[3, 5])));
    }

    #[test]
    fn finds_minimal_weights() {
        assert_eq!(qh_find_diagonal(&sym(&[&["x1", "x2^2"], &["x1^2"]])), Some(w(&[4, 3], &[4, 8])));
        assert_eq!(qh_find_diagonal(&sym(&[&["x1", "0"], &["0"]])), Some(w(&[1, 1], &[1, 0])));
        assert_eq!(qh_find_diagonal(&sym(&[&["x1", "0"], &["x1*x2+x2^3"]])), Some(w(&[2, 1], &[2, 3])));
        assert_eq!(qh_find_diagonal(&sym(&[&["x1", "x2^3"], &["x1^2 + x1*x2^2 + x2^4"]])), Some(w(&[2, 1], &[2, 4])));
    }

    #[test]
    fn no_weights_for_mixed_degrees() {
        let ah = sym(&[&["x1^3", "x1^2*x2 + x2^3"], &["x2^5"]]);
        assert_eq!(qh_find_diagonal(&ah), None);
    }

    #[test]
    fn zero_weights_when_forced() {
        // x2 and x1*x2 share an entry, so x1 must carry weight 0
        let a = sym(&[&["x2", "0"], &["x2 + x1*x2"]]);
        assert_eq!(qh_find_diagonal(&a), Some(w(&[0, 1], &[1, 1])));
    }
}
