//! Tangent spaces to orbits of the congruence-plus-coordinate-change group,
//! extended codimension, complete transversals, determinacy and stratum
//! checks.

mod classify;
mod stratum;

pub use classify::{classify_germ, cokernel_length, ClassifyReport, ClassifyStatus, GermInvariants};
pub use stratum::{mather_stratum_check, table4_family, table4_strata, JetFamily, Stratum, StratumError, StratumReport};

use serde::Serialize;

use crate::linalg::{JetCoords, JetSubspace, SparseVec};
use crate::polyring::{sym_positions, Monomial, Polynomial, SymMatrix};
use crate::scalar::Scalar;

/// Which group's tangent space to compute. For the jet-level variants the
/// truncation degree passed alongside is the jet order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupVariant {
    /// Diffeomorphisms fixing the origin, arbitrary matrix families.
    G,
    /// Extended tangent space: vector fields need not vanish at the origin.
    Ge,
    /// Full `k`-jet group acting on `k`-jets.
    Jet,
    /// Unipotent `k`-jet subgroup: vector fields of order at least two and
    /// matrix families vanishing at the origin.
    UnipotentJet,
}

struct Ranges {
    ambient: (u32, u32),
    fields: (u32, u32),
    matrices: (u32, u32),
}

impl GroupVariant {
    fn ranges(self, d: u32) -> Ranges {
        use GroupVariant::*;
        let (ambient, fields, matrices) = match self {
            Ge => ((0, d), (0, d), (0, d)),
            G => ((0, d), (1, d), (0, d)),
            Jet => ((1, d), (1, d), (0, d)),
            UnipotentJet => ((1, d), (2, d), (1, d)),
        };
        Ranges { ambient, fields, matrices }
    }
}

/// A tangent space together with the coordinates it is expressed in.
#[derive(Clone, Debug)]
pub struct TangentSpace<S: Scalar> {
    pub coords: JetCoords,
    pub space: JetSubspace<S>,
}

impl<S: Scalar> TangentSpace<S> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn quotient_dim(&self) -> usize {
        self.space.quotient_dim()
    }

    pub fn contains_sym(&self, b: &SymMatrix<S>) -> bool {
        self.space.contains(&self.coords.encode_sym(b)).expect("encoded in own coordinates")
    }

    /// Intersection with the homogeneous piece of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> JetSubspace<S> {
        self.space.tail(self.coords.degree_start(d))
    }

    /// Number of coordinates of degree `d`.
    pub fn block_len(&self, d: u32) -> usize {
        self.coords.degree_start(d + 1) - self.coords.degree_start(d)
    }
}

/// `UᵀA + AU` for `U = m·E_pq`.
pub fn matrix_generator_image<S: Scalar>(a: &SymMatrix<S>, p: usize, q: usize, m: &Monomial) -> SymMatrix<S> {
    let n = a.n();
    let mut out = SymMatrix::zero(n, a.nvars());
    for (i, j) in sym_positions(n) {
        let mut v = Polynomial::zero(a.nvars());
        if i == q {
            v = &v + &a.get(p, j).mul_monomial(m);
        }
        if j == q {
            v = &v + &a.get(i, p).mul_monomial(m);
        }
        out.set(i, j, v);
    }
    out
}

/// Spanning set of the tangent space, image by image, before reduction.
fn generator_images<S: Scalar>(a: &SymMatrix<S>, g: GroupVariant, d: u32, coords: &JetCoords) -> Vec<SparseVec<S>> {
    let r = a.nvars();
    let n = a.n();
    let ranges = g.ranges(d);
    let a = a.truncate(d);
    let partials: Vec<SymMatrix<S>> = (0..r).map(|i| a.map(|p| p.partial(i))).collect();
    let mut out = Vec::new();
    for m in Monomial::up_to_degree(r, ranges.fields.0, ranges.fields.1) {
        for dp in &partials {
            out.push(coords.encode_sym(&dp.map(|p| p.mul_monomial(&m).truncate(d))));
        }
    }
    for m in Monomial::up_to_degree(r, ranges.matrices.0, ranges.matrices.1) {
        for p in 0..n {
            for q in 0..n {
                out.push(coords.encode_sym(&matrix_generator_image(&a, p, q, &m)));
            }
        }
    }
    out
}

/// Tangent space of `A` under `g`, modulo terms of degree above `d`.
pub fn tangent_space<S: Scalar>(a: &SymMatrix<S>, g: GroupVariant, d: u32) -> TangentSpace<S> {
    let (lo, hi) = g.ranges(d).ambient;
    let coords = JetCoords::sym(a.n(), a.nvars(), lo, hi);
    let space = JetSubspace::span(coords.len(), generator_images(a, g, d, &coords)).expect("images lie in the ambient");
    TangentSpace { coords, space }
}

/// Codimension value: exact when the stabilization certificate passed,
/// otherwise a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimReport {
    pub value: usize,
    pub stabilized: bool,
    /// Truncation degree at which the value was read off.
    pub degree_used: u32,
    /// `(d, dim of degree-≤d jets modulo the truncated tangent space)`.
    pub trace: Vec<(u32, usize)>,
}

impl CodimReport {
    pub fn exact(&self) -> Option<usize> {
        self.stabilized.then_some(self.value)
    }
}

/// Extended codimension of `A` by truncation with a Nakayama certificate.
///
/// At each degree `D` the tangent space is computed modulo `m^{D+1}`. If the
/// whole homogeneous piece of degree `D` lies in it, then `m^D·Sym` lies in
/// the tangent module (which is a module over the function ring), and the
/// codimension equals the quotient dimension at `D − 1` (and at `D`).
pub fn ge_codimension<S: Scalar>(a: &SymMatrix<S>, dmax: u32) -> CodimReport {
    codimension(a, GroupVariant::Ge, dmax)
}

pub fn codimension<S: Scalar>(a: &SymMatrix<S>, g: GroupVariant, dmax: u32) -> CodimReport {
    let mut trace = Vec::new();
    for d in 1..=dmax {
        let t = tangent_space(a, g, d);
        let q = t.quotient_dim();
        trace.push((d, q));
        let top = t.homogeneous_part(d).dim();
        if top == t.block_len(d) {
            return CodimReport { value: q, stabilized: true, degree_used: d - 1, trace };
        }
    }
    let value = trace.last().map_or(0, |&(_, q)| q);
    CodimReport { value, stabilized: false, degree_used: dmax, trace }
}

/// Dimension of the tangent space to the orbit of `j^k A` under the
/// `k`-jet group, inside the space of `k`-jets vanishing at the origin.
pub fn orbit_tangent_dim_jet<S: Scalar>(jet: &SymMatrix<S>, k: u32) -> usize {
    tangent_space(&jet.truncate(k), GroupVariant::Jet, k).dim()
}

/// Homogeneous degree-`k+1` matrices spanning a complement of the unipotent
/// tangent space within the degree-`k+1` piece.
pub fn complete_transversal<S: Scalar>(jet: &SymMatrix<S>, k: u32) -> Vec<SymMatrix<S>> {
    let t = tangent_space(&jet.truncate(k), GroupVariant::UnipotentJet, k + 1);
    let top = t.homogeneous_part(k + 1);
    let start = t.coords.degree_start(k + 1);
    let pivots: Vec<usize> = top.pivots().collect();
    (start..t.coords.len())
        .filter(|i| !pivots.contains(i))
        .map(|i| t.coords.decode_sym(jet.n(), &SparseVec::unit(i)))
        .collect()
}

/// Sufficient test for `k`-determinacy: every homogeneous piece of degree
/// `k+1..=d_check` lies in the unipotent tangent space at that jet level.
/// `false` means inconclusive.
pub fn determinacy_sufficient<S: Scalar>(a: &SymMatrix<S>, k: u32, d_check: u32) -> bool {
    if a.truncate(k).is_zero() {
        return false;
    }
    (k + 1..=d_check.max(k + 1)).all(|d| {
        let t = tangent_space(&a.truncate(d), GroupVariant::UnipotentJet, d);
        t.homogeneous_part(d).dim() == t.block_len(d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn sym(rows: &[&[&str]]) -> SymMatrix<Q> {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    #[test]
    fn zero_germ_has_zero_tangent() {
        let z = SymMatrix::<Q>::zero(2, 2);
        assert_eq!(tangent_space(&z, GroupVariant::Ge, 3).dim(), 0);
    }

    #[test]
    fn codimension_of_simple_forms() {
        let a = sym(&[&["x1", "0"], &["x2"]]);
        assert_eq!(ge_codimension(&a, 6).exact(), Some(1));
        assert_eq!(tangent_space(&a, GroupVariant::Ge, 3).quotient_dim(), 1);
        let b = sym(&[&["x1", "x2^2"], &["x1^2"]]);
        assert_eq!(ge_codimension(&b, 8).exact(), Some(6));
    }

    #[test]
    fn transversal_of_rank_one_jet() {
        let j = sym(&[&["x1", "0"], &["0"]]);
        let t = complete_transversal(&j, 1);
        let shown: Vec<String> = t.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["[0, x2^2; x2^2, 0]", "[0, 0; 0, x1^2]", "[0, 0; 0, x1*x2]", "[0, 0; 0, x2^2]"]);
        assert_eq!(complete_transversal(&SymMatrix::<Q>::zero(2, 2), 0).len(), 6);
        assert!(complete_transversal(&sym(&[&["x1", "0"], &["x2"]]), 1).is_empty());
    }

    #[test]
    fn determinacy() {
        assert!(determinacy_sufficient(&sym(&[&["x1", "0"], &["x2"]]), 1, 3));
        // the weight-9 direction x2^3 in the (2,2) entry is not reached by
        // fields of order two, so the 2-jet test is inconclusive
        let b = sym(&[&["x1", "x2^2"], &["x1^2"]]);
        assert!(!determinacy_sufficient(&b, 2, 4));
        assert!(determinacy_sufficient(&b, 3, 6));
        assert!(!determinacy_sufficient(&sym(&[&["x1^3", "0"], &["0"]]), 2, 4));
    }
}
