use std::collections::HashMap;

use super::SparseVec;
use crate::polyring::{sym_dim, Monomial, Polynomial, SymMatrix};
use crate::scalar::Scalar;

/// Coordinates on vector-valued polynomial jets with `lo <= degree <= hi`.
///
/// A coordinate is a pair (component, monomial). Coordinates are ordered by
/// degree first, then component, then monomial in descending graded-lex
/// order, so every degree occupies a contiguous block and lower degrees come
/// first.
#[derive(Clone, Debug)]
pub struct JetCoords {
    components: usize,
    nvars: usize,
    lo: u32,
    hi: u32,
    list: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    offsets: Vec<usize>,
}

impl JetCoords {
    pub fn new(components: usize, nvars: usize, lo: u32, hi: u32) -> Self {
        let mut list = Vec::new();
        let mut offsets = Vec::new();
        for d in lo..=hi {
            offsets.push(list.len());
            let monos = Monomial::of_degree(nvars, d);
            for c in 0..components {
                for m in &monos {
                    list.push((c, m.clone()));
                }
            }
        }
        offsets.push(list.len());
        let index = list.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        JetCoords { components, nvars, lo, hi, list, index, offsets }
    }

    /// Upper-triangle entries of `n×n` symmetric matrices.
    pub fn sym(n: usize, nvars: usize, lo: u32, hi: u32) -> Self {
        Self::new(sym_dim(n), nvars, lo, hi)
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_range(&self) -> (u32, u32) {
        (self.lo, self.hi)
    }

    pub fn coordinate(&self, i: usize) -> &(usize, Monomial) {
        &self.list[i]
    }

    pub fn index_of(&self, component: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(component, m.clone())).copied()
    }

    /// First index of the block of degree `d`; `d = hi + 1` gives `len()`.
    pub fn degree_start(&self, d: u32) -> usize {
        if d <= self.lo {
            return 0;
        }
        if d > self.hi {
            return self.len();
        }
        self.offsets[(d - self.lo) as usize]
    }

    /// Encodes component polynomials; terms outside the degree range are
    /// dropped.
    pub fn encode<S: Scalar>(&self, parts: &[Polynomial<S>]) -> SparseVec<S> {
        let mut v = SparseVec::new();
        for (c, p) in parts.iter().enumerate() {
            for (m, x) in p.terms() {
                if let Some(i) = self.index_of(c, m) {
                    v.add_at(i, x.clone());
                }
            }
        }
        v
    }

    pub fn encode_sym<S: Scalar>(&self, a: &SymMatrix<S>) -> SparseVec<S> {
        self.encode(a.upper())
    }

    pub fn encode_poly<S: Scalar>(&self, p: &Polynomial<S>) -> SparseVec<S> {
        self.encode(std::slice::from_ref(p))
    }

    pub fn decode<S: Scalar>(&self, v: &SparseVec<S>) -> Vec<Polynomial<S>> {
        let mut parts = vec![Polynomial::zero(self.nvars); self.components];
        for (i, x) in v.iter() {
            let (c, m) = &self.list[i];
            parts[*c].add_term(m.clone(), x.clone());
        }
        parts
    }

    pub fn decode_sym<S: Scalar>(&self, n: usize, v: &SparseVec<S>) -> SymMatrix<S> {
        SymMatrix::from_upper(n, self.nvars, self.decode(v)).expect("component count matches")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use crate::Q;

    #[test]
    fn layout_and_round_trip() {
        let c = JetCoords::sym(2, 2, 1, 2);
        // degree 1: 3 entries x 2 monomials; degree 2: 3 entries x 3 monomials
        assert_eq!(c.len(), 15);
        assert_eq!(c.degree_start(2), 6);
        assert_eq!(c.degree_start(3), 15);
        let a = SymMatrix::<Q>::parse(2, 2, &[&["x1", "x2^2"], &["x1*x2 - x2"]]).unwrap();
        let v = c.encode_sym(&a);
        assert_eq!(c.decode_sym(2, &v), a);
        let f: Polynomial<Q> = parse_polynomial("x1 + x2^3", 2).unwrap();
        let fc = JetCoords::new(1, 2, 0, 2);
        assert_eq!(fc.decode(&fc.encode_poly(&f))[0], f.truncate(2));
    }
}
