use serde::Serialize;

use super::weights::{qh_find_diagonal, WeightSystem};
use crate::linalg::{kernel, JetCoords, JetSubspace, SparseVec};
use crate::polyring::{PolyMatrix, SymMatrix, VectorFieldJet};
use crate::scalar::Scalar;
use crate::tangent::matrix_generator_image;
use crate::Sym;

/// Jets of the Lie algebra `L𝒟_A`: pairs `(V, U)` with `V(0) = 0`,
/// `deg V ≤ d`, `deg U ≤ d − 1` and `dA(V) = UᵀA + AU` modulo terms of
/// degree above `d + ord(A) − 1`.
///
/// Every `d`-jet of a true element lies in [`LdaJets::space`], so the space
/// can only be too large, and it shrinks towards the truth as `d` grows.
#[derive(Clone, Debug)]
pub struct LdaJets<S: Scalar> {
    pub degree: u32,
    pub equation_degree: u32,
    /// `r` components, degrees `1..=d`.
    pub field_coords: JetCoords,
    /// `n²` components (`p·n + q` for entry `(p, q)`), degrees `0..d`.
    pub matrix_coords: JetCoords,
    /// Projection of the solution space onto the `V`-parts.
    pub space: JetSubspace<S>,
    n: usize,
    solutions: Vec<SparseVec<S>>,
}

pub fn lda_jets<S: Scalar>(a: &SymMatrix<S>, d: u32) -> LdaJets<S> {
    assert!(d >= 1, "L𝒟 jets need d ≥ 1");
    let (n, r) = (a.n(), a.nvars());
    let top = match a.order() {
        Some(o) => d + o.max(1) - 1,
        None => d,
    };
    let a = a.truncate(top);
    let eqs = JetCoords::sym(n, r, 0, top);
    let field_coords = JetCoords::new(r, r, 1, d);
    let matrix_coords = JetCoords::new(n * n, r, 0, d - 1);
    let partials: Vec<SymMatrix<S>> = (0..r).map(|i| a.map(|p| p.partial(i))).collect();
    let mut images = Vec::with_capacity(field_coords.len() + matrix_coords.len());
    for k in 0..field_coords.len() {
        let (i, m) = field_coords.coordinate(k);
        images.push(eqs.encode_sym(&partials[*i].map(|p| p.mul_monomial(m).truncate(top))));
    }
    for k in 0..matrix_coords.len() {
        let (c, m) = matrix_coords.coordinate(k);
        let image = matrix_generator_image(&a, c / n, c % n, m).map(|p| -p.truncate(top));
        images.push(eqs.encode_sym(&image));
    }
    let solutions = kernel(&images);
    let nv = field_coords.len();
    let space = JetSubspace::span(nv, solutions.iter().map(|s| s.restrict(0, nv))).expect("V-part fits");
    LdaJets { degree: d, equation_degree: top, field_coords, matrix_coords, space, n, solutions }
}

impl<S: Scalar> LdaJets<S> {
    pub fn nvars(&self) -> usize {
        self.field_coords.nvars()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn encode_field(&self, v: &VectorFieldJet<S>) -> SparseVec<S> {
        self.field_coords.encode(v.components())
    }

    pub fn decode_field(&self, v: &SparseVec<S>) -> VectorFieldJet<S> {
        VectorFieldJet::new(self.field_coords.decode(v))
    }

    /// Whether the `d`-jet of `v` is the `V`-part of some solution. Fields
    /// not vanishing at the origin are never members.
    pub fn contains(&self, v: &VectorFieldJet<S>) -> bool {
        if v.components().iter().any(|c| !c.constant_term().is_zero()) {
            return false;
        }
        self.space.contains(&self.encode_field(&v.truncate(self.degree))).expect("own coordinates")
    }

    /// Canonical basis of the `V`-parts.
    pub fn basis(&self) -> Vec<VectorFieldJet<S>> {
        self.space.rref_basis().iter().map(|v| self.decode_field(v)).collect()
    }

    /// Basis of the solution space as `(V, U)` pairs.
    pub fn pairs(&self) -> Vec<(VectorFieldJet<S>, PolyMatrix<S>)> {
        let nv = self.field_coords.len();
        let r = self.nvars();
        self.solutions
            .iter()
            .map(|s| {
                let v = self.decode_field(&s.restrict(0, nv));
                let entries = self.matrix_coords.decode(&s.restrict(nv, nv + self.matrix_coords.len()));
                let rows = entries.chunks(self.n).map(<[_]>::to_vec).collect();
                (v, PolyMatrix::from_rows(r, rows))
            })
            .collect()
    }

    /// Linear parts of the `V`-parts, as a subspace of `r×r` matrices
    /// flattened row by row.
    pub fn linear_parts(&self) -> JetSubspace<S> {
        let r = self.nvars();
        let cut = self.field_coords.degree_start(2);
        let mut out = JetSubspace::new(r * r);
        for v in self.space.echelon_basis() {
            let mut flat = SparseVec::new();
            for (k, x) in v.restrict(0, cut).iter() {
                let (i, m) = self.field_coords.coordinate(k);
                let j = m.exponents().iter().position(|&e| e == 1).expect("degree-one monomial");
                flat.add_at(i * r + j, x.clone());
            }
            out.insert(flat).expect("fits");
        }
        out
    }

    /// Whether some achievable linear part has nonzero trace.
    pub fn has_nonzero_trace(&self) -> bool {
        let r = self.nvars();
        self.linear_parts().echelon_basis().any(|v| !(0..r).fold(S::zero(), |acc, i| acc + v.get(i * r + i)).is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SqhVerdict {
    /// Diagonal weights found in the given coordinates.
    Sqh(WeightSystem),
    /// Every achievable linear part of `L𝒟_A` is trace-free, so no Euler
    /// field of positive total weight lies in it, in any coordinates.
    NotSqh,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SqhCertificate {
    pub verdict: SqhVerdict,
    pub degree_used: u32,
    /// `(d, dim of achievable linear parts)` for each degree examined.
    pub linear_part_dims: Vec<(u32, usize)>,
    /// Basis of the achievable linear parts at `degree_used`, as matrices
    /// `[∂Vᵢ/∂xⱼ(0)]`.
    pub linear_parts: Vec<String>,
}

fn show_linear_parts(space: &JetSubspace<crate::Q>, r: usize) -> Vec<String> {
    space
        .rref_basis()
        .iter()
        .map(|v| {
            let rows: Vec<String> = (0..r)
                .map(|i| (0..r).map(|j| v.get(i * r + j).to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            format!("[{}]", rows.join("; "))
        })
        .collect()
}

/// Decides symmetric quasi-homogeneity where possible. Positive answers come
/// from [`qh_find_diagonal`]; negative answers from the trace of linear
/// parts of `L𝒟_A` once their span has been equal at three consecutive
/// degrees.
pub fn sqh_obstruction(a: &Sym, dmax: u32) -> SqhCertificate {
    if let Some(w) = qh_find_diagonal(a) {
        return SqhCertificate { verdict: SqhVerdict::Sqh(w), degree_used: 0, linear_part_dims: Vec::new(), linear_parts: Vec::new() };
    }
    let r = a.nvars();
    let mut dims = Vec::new();
    let mut last = None;
    for d in 1..=dmax {
        let jets = lda_jets(a, d);
        let lin = jets.linear_parts();
        dims.push((d, lin.dim()));
        let stable = dims.len() >= 3 && dims[dims.len() - 3..].iter().all(|&(_, k)| k == lin.dim());
        if stable {
            let verdict = if jets.has_nonzero_trace() {
                SqhVerdict::Inconclusive("a linear part with nonzero trace is achievable; no diagonal weights in these coordinates".into())
            } else {
                SqhVerdict::NotSqh
            };
            return SqhCertificate { verdict, degree_used: d, linear_part_dims: dims, linear_parts: show_linear_parts(&lin, r) };
        }
        last = Some(lin);
    }
    SqhCertificate {
        verdict: SqhVerdict::Inconclusive(format!("linear parts did not stabilize by degree {dmax}")),
        degree_used: dmax,
        linear_part_dims: dims,
        linear_parts: last.map_or_else(Vec::new, |l| show_linear_parts(&l, r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, Monomial};
    use crate::quasihom::qh_check;
    use crate::scalar::q;
    use crate::{Field, Q};

    fn sym(rows: &[&[&str]]) -> Sym {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    fn field(parts: &[&str]) -> Field {
        VectorFieldJet::new(parts.iter().map(|p| parse_polynomial(p, 2).unwrap()).collect())
    }

    fn monomial_multiple(v: &Field, m: &Monomial) -> Field {
        VectorFieldJet::new(v.components().iter().map(|c| c.mul_monomial(m)).collect())
    }

    fn a21_signed(d1: i64, d2: i64) -> Sym {
        let e22 = format!("{d1}*(x1 + {d2}*x2^2)^2 + x2^5");
        SymMatrix::parse(2, 2, &[&["x1", "0"], &[e22.as_str()]]).unwrap()
    }

    fn a21() -> Sym {
        a21_signed(1, 1)
    }

    fn ah() -> Sym {
        sym(&[&["x1^3", "x1^2*x2 + x2^3"], &["x2^5"]])
    }

    #[test]
    fn solutions_satisfy_the_equation() {
        let a = sym(&[&["x1", "x2^2"], &["x1*x2"]]);
        let jets = lda_jets(&a, 3);
        for (v, u) in jets.pairs() {
            let lhs = a.differential(&v).truncate(jets.equation_degree);
            let full = a.to_full();
            let rhs = u.transpose().mul(&full).add(&full.mul(&u));
            let rhs = SymMatrix::from_full(&rhs).unwrap().truncate(jets.equation_degree);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn diagonal_scaling_field() {
        let jets = lda_jets(&sym(&[&["x1", "0"], &["x2"]]), 2);
        assert!(jets.contains(&field(&["x1", "0"])));
        assert!(!jets.contains(&field(&["1", "0"])));
    }

    #[test]
    fn listed_generators_of_a21() {
        for (d1, d2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let jets = lda_jets(&a21_signed(d1, d2), 6);
            let g1 = [format!("{}*x1*x2 + 25*x1*x2^2", 16 * d1), format!("{}*x1 + {}*x2^2 + 10*x2^3", 2 * d1 * d2, 10 * d1)];
            let g2 = [format!("5*x1^2 + {d2}*x1*x2^2"), "2*x1*x2".to_string()];
            for g in [g1, g2] {
                assert!(jets.contains(&field(&[g[0].as_str(), g[1].as_str()])), "{d1} {d2} {g:?}");
            }
            assert!(!jets.contains(&field(&["2*x1", "x2"])));
        }
    }

    #[test]
    fn printed_generators_of_ah_fail_in_degree_four() {
        // With V = (x1², 3x1x2) + h.o.t. the degree-3 equations force U(0) = 0.
        // In degree 4, entry (1,1) forces U11 = 3x1/2 and U21 = 0 in the
        // linear part, entry (1,2) then forces U12 = -4x2, while entry (2,2)
        // reads 2·U12·(x1²x2 + x2³) = 0. So the first printed field is not in
        // the algebra, at any truncation that sees its quadratic part.
        for d in 2..=9 {
            assert!(!lda_jets(&ah(), d).contains(&field(&["x1^2 + 3*x1*x2^3", "3*x1*x2 + x2^4"])));
        }
    }

    #[test]
    fn certificates() {
        assert_eq!(sqh_obstruction(&a21(), 10).verdict, SqhVerdict::NotSqh);
        assert_eq!(sqh_obstruction(&ah(), 12).verdict, SqhVerdict::NotSqh);
        let ab = sym(&[&["x1", "x2^3"], &["x1^2 + x1*x2^2 + x2^4"]]);
        assert_eq!(sqh_obstruction(&ab, 6).verdict, SqhVerdict::Sqh(WeightSystem::new(vec![2, 1], vec![2, 4])));
    }

    #[test]
    fn euler_field_and_module_property() {
        let a = sym(&[&["x1", "x2^2"], &["x1^2"]]);
        let w = qh_find_diagonal(&a).unwrap();
        assert!(qh_check(&a, &w));
        let jets = lda_jets(&a, 4);
        let e = w.euler::<Q>();
        assert!(jets.contains(&e));
        for m in Monomial::up_to_degree(2, 1, 2) {
            for v in jets.basis() {
                assert!(jets.contains(&monomial_multiple(&v, &m)));
            }
        }
    }

    #[test]
    fn constant_congruence_keeps_fields() {
        let a = a21();
        let x = PolyMatrix::from_scalars(2, &[vec![q(1), q(2)], vec![q(-1), q(3)]]);
        let b = a.congruence(&x);
        assert_eq!(lda_jets(&a, 4).space, lda_jets(&b, 4).space);
    }
}
