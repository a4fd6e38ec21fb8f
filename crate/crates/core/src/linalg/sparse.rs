use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::Scalar;

/// Sparse coordinate vector: index → nonzero value.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct SparseVec<S: Scalar>(BTreeMap<usize, S>);

impl<S: Scalar> SparseVec<S> {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::new();
        v.0.insert(i, S::one());
        v
    }

    pub fn from_dense(values: &[S]) -> Self {
        let mut v = Self::new();
        for (i, x) in values.iter().enumerate() {
            v.add_at(i, x.clone());
        }
        v
    }

    pub fn to_dense(&self, len: usize) -> Vec<S> {
        let mut out = vec![S::zero(); len];
        for (&i, x) in &self.0 {
            out[i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> S {
        self.0.get(&i).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.0.iter().map(|(&i, x)| (i, x))
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    /// Smallest index holding a nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.0.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn add_at(&mut self, i: usize, x: S) {
        if x.is_negligible() {
            return;
        }
        let entry = self.0.entry(i).or_insert_with(S::zero);
        *entry = entry.clone() + x;
        if entry.is_negligible() {
            self.0.remove(&i);
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &S, other: &SparseVec<S>) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.0 {
            self.add_at(i, c.clone() * x.clone());
        }
    }

    pub fn scale(&mut self, c: &S) {
        for x in self.0.values_mut() {
            *x = x.clone() * c.clone();
        }
        self.0.retain(|_, x| !x.is_negligible());
    }

    /// Keeps only the coordinates in `lo..hi`, shifted down by `lo`.
    pub fn restrict(&self, lo: usize, hi: usize) -> SparseVec<S> {
        SparseVec(self.0.range(lo..hi).map(|(&i, x)| (i - lo, x.clone())).collect())
    }

    pub fn shift(&self, by: usize) -> SparseVec<S> {
        SparseVec(self.0.iter().map(|(&i, x)| (i + by, x.clone())).collect())
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec<S> {
        let mut v = Self::new();
        for (&i, x) in &self.0 {
            if let Some(j) = f(i) {
                v.add_at(j, x.clone());
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("vector index {index} outside ambient dimension {ambient}")]
    DimensionMismatch { index: usize, ambient: usize },
}

/// Subspace of a coordinate space, kept in row-echelon form.
///
/// Each basis vector is normalized so that its leading (smallest-index)
/// entry is one, and no two basis vectors share a leading index. Because
/// leading entries are the smallest indices, the vectors of the subspace
/// that vanish on coordinates `0..t` are exactly the span of basis vectors
/// leading at `t` or later. Coordinate systems used throughout the crate list
/// low jet degrees first, which turns this into intersection with higher
/// homogeneous pieces.
#[derive(Clone, Debug)]
pub struct JetSubspace<S: Scalar> {
    ambient: usize,
    rows: BTreeMap<usize, SparseVec<S>>,
}

impl<S: Scalar> JetSubspace<S> {
    pub fn new(ambient: usize) -> Self {
        JetSubspace { ambient, rows: BTreeMap::new() }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = SparseVec<S>>) -> Result<Self, SubspaceError> {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::new(ambient);
        for i in 0..ambient {
            s.rows.insert(i, SparseVec::unit(i));
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.dim()
    }

    fn check(&self, v: &SparseVec<S>) -> Result<(), SubspaceError> {
        match v.max_index() {
            Some(i) if i >= self.ambient => Err(SubspaceError::DimensionMismatch { index: i, ambient: self.ambient }),
            _ => Ok(()),
        }
    }

    /// Remainder of `v` after eliminating every leading index of the basis.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut v = v.clone();
        let mut from = 0;
        while let Some((&i, x)) = v.0.range(from..).find(|(i, _)| self.rows.contains_key(i)) {
            let c = -x.clone();
            v.axpy(&c, &self.rows[&i]);
            from = i + 1;
        }
        v
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<S>) -> Result<bool, SubspaceError> {
        self.check(&v)?;
        let mut r = self.reduce(&v);
        let Some(lead) = r.leading() else { return Ok(false) };
        let inv = S::one() / r.get(lead);
        r.scale(&inv);
        self.rows.insert(lead, r);
        Ok(true)
    }

    pub fn contains(&self, v: &SparseVec<S>) -> Result<bool, SubspaceError> {
        self.check(v)?;
        Ok(self.reduce(v).is_zero())
    }

    pub fn contains_subspace(&self, other: &JetSubspace<S>) -> bool {
        other.rows.values().all(|v| self.reduce(v).is_zero())
    }

    /// Leading indices of the echelon basis, ascending.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Indices that are not leading indices: the unit vectors at these
    /// positions span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.rows.contains_key(i)).collect()
    }

    pub fn echelon_basis(&self) -> impl Iterator<Item = &SparseVec<S>> {
        self.rows.values()
    }

    /// Reduced row-echelon basis: every leading index appears in exactly one
    /// basis vector. Deterministic for a given subspace.
    pub fn rref_basis(&self) -> Vec<SparseVec<S>> {
        let mut out: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
        for (&p, v) in self.rows.iter().rev() {
            let mut v = v.clone();
            for (&q, w) in &out {
                let c = v.get(q);
                if !c.is_zero() {
                    v.axpy(&-c, w);
                }
            }
            out.insert(p, v);
        }
        out.into_values().collect()
    }

    /// Intersection with the coordinate subspace where indices `< t` vanish.
    pub fn tail(&self, t: usize) -> JetSubspace<S> {
        JetSubspace { ambient: self.ambient, rows: self.rows.range(t..).map(|(&k, v)| (k, v.clone())).collect() }
    }

    /// Projection onto coordinates `< t` (dropping the rest).
    pub fn truncate_coords(&self, t: usize) -> JetSubspace<S> {
        let mut s = JetSubspace::new(t);
        for v in self.rows.values() {
            s.insert(v.restrict(0, t)).expect("restricted vector fits");
        }
        s
    }

    pub fn sum(&self, other: &JetSubspace<S>) -> JetSubspace<S> {
        let mut s = self.clone();
        for v in other.rows.values() {
            s.insert(v.clone()).expect("same ambient");
        }
        s
    }
}

impl<S: Scalar> PartialEq for JetSubspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_subspace(other)
    }
}

/// Kernel of the linear map sending unknown `j` to `images[j]`, as a list of
/// coefficient vectors over the unknowns.
pub fn kernel<S: Scalar>(images: &[SparseVec<S>]) -> Vec<SparseVec<S>> {
    // echelon rows carry the combination of unknowns that produced them
    let mut rows: BTreeMap<usize, (SparseVec<S>, SparseVec<S>)> = BTreeMap::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = SparseVec::unit(j);
        let mut from = 0;
        while let Some((&i, x)) = v.0.range(from..).find(|(i, _)| rows.contains_key(i)) {
            let c = -x.clone();
            let (rv, rc) = &rows[&i];
            v.axpy(&c, rv);
            combo.axpy(&c, rc);
            from = i + 1;
        }
        match v.leading() {
            None => out.push(combo),
            Some(lead) => {
                let inv = S::one() / v.get(lead);
                v.scale(&inv);
                combo.scale(&inv);
                rows.insert(lead, (v, combo));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Q;

    fn v(xs: &[i64]) -> SparseVec<Q> {
        SparseVec::from_dense(&xs.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn span_and_membership() {
        let s = JetSubspace::span(2, [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(JetSubspace::<Q>::new(3).dim(), 0);
        let t = JetSubspace::span(3, [v(&[1, 2, 0]), v(&[0, 1, 1])]).unwrap();
        assert!(t.contains(&v(&[1, 3, 1])).unwrap());
        assert!(!t.contains(&v(&[0, 0, 1])).unwrap());
        assert!(t.contains(&SparseVec::new()).unwrap());
        assert!(t.clone().insert(v(&[0, 0, 0, 1])).is_err());
        assert_eq!(t.quotient_dim(), 1);
    }

    #[test]
    fn tail_is_intersection() {
        // span{(1,1,0), (1,0,1)} meets {x0 = 0} in span{(0,1,-1)}
        let s = JetSubspace::span(3, [v(&[1, 1, 0]), v(&[1, 0, 1])]).unwrap();
        let t = s.tail(1);
        assert_eq!(t.dim(), 1);
        assert!(t.contains(&v(&[0, 1, -1])).unwrap());
    }

    #[test]
    fn rref_is_reduced() {
        let s = JetSubspace::span(3, [v(&[1, 1, 1]), v(&[0, 1, 2])]).unwrap();
        let b = s.rref_basis();
        assert_eq!(b, vec![v(&[1, 0, -1]), v(&[0, 1, 2])]);
    }

    #[test]
    fn kernel_of_columns() {
        // columns (1,0), (0,1), (1,1): kernel spanned by (1,1,-1)
        let k = kernel(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
        assert_eq!(k, vec![v(&[-1, -1, 1])]);
    }
}
