//! Linear 1-jets `C·x1 + D·x2` of symmetric matrix families up to constant
//! congruence and linear coordinate change.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyring::{Monomial, Polynomial, SymMatrix};
use crate::scalar::{q, rational_sqrt};
use crate::unimodular::CongruenceWitness;
use crate::{Poly, Sym, Q};

type M2 = [[Q; 2]; 2];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PencilError {
    #[error("expected a binary quadratic form, got {0}")]
    NotQuadratic(String),
    #[error("expected {expected}x{expected} symmetric matrices")]
    Shape { expected: usize },
}

/// Class of a binary quadratic form up to linear change of variables and
/// multiplication by a positive constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QuadraticClass {
    Zero,
    RankOnePos,
    RankOneNeg,
    Indefinite,
    PosDef,
    NegDef,
}

/// Result of classifying a 2×2 pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct OneJetClass {
    /// Row of the list of 1-jet representatives, `1..=6`.
    pub class_id: u8,
    /// Sign choice for class 5, `+1` or `-1`.
    pub sign: Option<i8>,
    /// `rank dA(0)`.
    pub rank: usize,
    /// Class of `j²det A`.
    pub det_class: QuadraticClass,
    /// Linear `Φ` and constant `X` taking the input to the representative.
    /// `None` when the reduction needs an irrational square root.
    pub witness: Option<CongruenceWitness<Q>>,
}

/// Binary quadratic form in `x1, x2` from its Gram matrix signature.
pub fn classify_quadratic(f: &Poly) -> Result<QuadraticClass, PencilError> {
    if f.nvars() != 2 || f.terms().any(|(m, _)| m.degree() != 2) {
        return Err(PencilError::NotQuadratic(f.to_string()));
    }
    let a = f.coeff(&Monomial::new(vec![2, 0]));
    let b = f.coeff(&Monomial::new(vec![1, 1]));
    let c = f.coeff(&Monomial::new(vec![0, 2]));
    Ok(gram_class(&a, &b, &c))
}

fn gram_class(a: &Q, b: &Q, c: &Q) -> QuadraticClass {
    let disc = a * c * q(4) - b * b;
    if a.is_zero() && b.is_zero() && c.is_zero() {
        QuadraticClass::Zero
    } else if disc.is_positive() {
        if a.is_positive() {
            QuadraticClass::PosDef
        } else {
            QuadraticClass::NegDef
        }
    } else if disc.is_negative() {
        QuadraticClass::Indefinite
    } else if a.is_positive() || c.is_positive() {
        QuadraticClass::RankOnePos
    } else {
        QuadraticClass::RankOneNeg
    }
}

/// The 1-jet `C x1 + D x2` as a matrix family in two variables.
pub fn pencil_matrix(c: &[Vec<Q>], d: &[Vec<Q>]) -> Sym {
    let n = c.len();
    let mut a = SymMatrix::zero(n, 2);
    for i in 0..n {
        for j in i..n {
            let e = &Polynomial::var(2, 0).scale(&c[i][j]) + &Polynomial::var(2, 1).scale(&d[i][j]);
            a.set(i, j, e);
        }
    }
    a
}

/// Coefficient matrices `(C, D)` of the linear part of a 2-variable family.
pub fn linear_coefficients(a: &Sym) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    (a.coefficient_matrix(&Monomial::var(2, 0)), a.coefficient_matrix(&Monomial::var(2, 1)))
}

/// Representative pencil `(C, D)` of a class; `sign` only matters for class 5.
pub fn representative(class_id: u8, sign: i8) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let m = |a: i64, b: i64, c: i64| vec![vec![q(a), q(b)], vec![q(b), q(c)]];
    match class_id {
        1 => (m(0, 0, 0), m(0, 0, 0)),
        2 => (m(1, 0, 0), m(0, 0, 0)),
        3 => (m(0, 1, 0), m(1, 0, 0)),
        4 => (m(1, 0, 0), m(0, 0, 1)),
        5 => (m(1, 0, sign as i64), m(0, 0, 0)),
        6 => (m(1, 0, -1), m(0, 1, 0)),
        _ => panic!("no 1-jet class {class_id}"),
    }
}

fn to_m2(m: &[Vec<Q>]) -> M2 {
    [[m[0][0].clone(), m[0][1].clone()], [m[1][0].clone(), m[1][1].clone()]]
}

fn comb(s: &Q, a: &M2, t: &Q, b: &M2) -> M2 {
    let e = |i: usize, j: usize| s * &a[i][j] + t * &b[i][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn det2(m: &M2) -> Q {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn is_zero2(m: &M2) -> bool {
    m.iter().flatten().all(Zero::is_zero)
}

fn congruent(m: &M2, x: &M2) -> M2 {
    let mut out: M2 = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Q::zero();
            for k in 0..2 {
                for l in 0..2 {
                    s += &x[k][i] * &m[k][l] * &x[l][j];
                }
            }
            out[i][j] = s;
        }
    }
    out
}

fn inverse2(m: &M2) -> M2 {
    let d = det2(m);
    [[&m[1][1] / &d, -&m[0][1] / &d], [-&m[1][0] / &d, &m[0][0] / &d]]
}

fn transpose2(m: &M2) -> M2 {
    [[m[0][0].clone(), m[1][0].clone()], [m[0][1].clone(), m[1][1].clone()]]
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn rows(m: &M2) -> Vec<Vec<Q>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// `M = μ·u uᵀ` for a rank-one symmetric `M`.
fn rank_one_factor(m: &M2) -> (Q, [Q; 2]) {
    if !m[0][0].is_zero() {
        (m[0][0].clone(), [Q::one(), &m[0][1] / &m[0][0]])
    } else {
        (m[1][1].clone(), [Q::zero(), Q::one()])
    }
}

/// `X` with `Xᵀu = e1` (and `Xᵀv = e2` when given).
fn adapted_basis(u: &[Q; 2], v: Option<&[Q; 2]>) -> M2 {
    let w = match v {
        Some(v) => v.clone(),
        None if u[0].is_zero() => [Q::one(), Q::zero()],
        None => [Q::zero(), Q::one()],
    };
    let basis = [[u[0].clone(), w[0].clone()], [u[1].clone(), w[1].clone()]];
    transpose2(&inverse2(&basis))
}

/// `L` with `Lᵀ M L` diagonal.
fn diagonalizer(m: &M2) -> M2 {
    let (o, z) = (Q::one(), Q::zero());
    if !m[0][0].is_zero() {
        [[o.clone(), -&m[0][1] / &m[0][0]], [z, o]]
    } else if !m[1][1].is_zero() {
        [[z.clone(), o.clone()], [o, -&m[0][1] / &m[1][1]]]
    } else {
        [[o.clone(), o.clone()], [o, -Q::one()]]
    }
}

fn witness(p: &M2, x: &M2) -> CongruenceWitness<Q> {
    CongruenceWitness::linear(&rows(p), &rows(x))
}

/// Classifies the 1-jet `C x1 + D x2` of a 2×2 family.
pub fn classify_one_jet(c: &[Vec<Q>], d: &[Vec<Q>]) -> Result<OneJetClass, PencilError> {
    if c.len() != 2 || d.len() != 2 || c.iter().chain(d).any(|r| r.len() != 2) {
        return Err(PencilError::Shape { expected: 2 });
    }
    let (c, d) = (to_m2(c), to_m2(d));
    let flat = |m: &M2| vec![m[0][0].clone(), m[0][1].clone(), m[1][1].clone()];
    let rank = Matrix::from_rows(vec![flat(&c), flat(&d)]).rank();
    let det_class = {
        let mixed = &c[0][0] * &d[1][1] + &c[1][1] * &d[0][0] - &c[0][1] * &d[0][1] * q(2);
        gram_class(&det2(&c), &mixed, &det2(&d))
    };
    let (o, z) = (Q::one(), Q::zero());
    let ident: M2 = [[o.clone(), z.clone()], [z.clone(), o.clone()]];
    let out = |class_id, sign, witness| OneJetClass { class_id, sign, rank, det_class, witness };
    match rank {
        0 => Ok(out(1, None, Some(witness(&ident, &ident)))),
        1 => {
            // A = M·ℓ(x); choose Φ with ℓ∘Φ = x1
            let (m, a, b) = if is_zero2(&c) {
                (d.clone(), z.clone(), o.clone())
            } else {
                let (a, b) = scalar_ratio(&c, &d);
                (c.clone(), a, b)
            };
            let p0: M2 = if !a.is_zero() { [[&o / &a, -&b / &a], [z.clone(), o.clone()]] } else { [[z.clone(), o.clone()], [&o / &b, z.clone()]] };
            if det2(&m).is_zero() {
                let (mu, u) = rank_one_factor(&m);
                let p = [[&p0[0][0] / &mu, p0[0][1].clone()], [&p0[1][0] / &mu, p0[1][1].clone()]];
                Ok(out(2, None, Some(witness(&p, &adapted_basis(&u, None)))))
            } else {
                let l = diagonalizer(&m);
                let diag = congruent(&m, &l);
                let (d1, d2) = (&diag[0][0], &diag[1][1]);
                let ratio = d2 / d1;
                let sign = if ratio.is_positive() { 1 } else { -1 };
                let p = [[&p0[0][0] / d1, p0[0][1].clone()], [&p0[1][0] / d1, p0[1][1].clone()]];
                let w = rational_sqrt(&ratio.abs()).map(|k| {
                    let x = mul2(&l, &[[o.clone(), z.clone()], [z.clone(), &o / &k]]);
                    witness(&p, &x)
                });
                Ok(out(5, Some(sign), w))
            }
        }
        _ => {
            let alpha = det2(&c);
            let beta = &c[0][0] * &d[1][1] + &c[1][1] * &d[0][0] - &c[0][1] * &d[0][1] * q(2);
            let gamma = det2(&d);
            match det_class {
                QuadraticClass::Indefinite => {
                    let dirs = isotropic_directions(&alpha, &beta, &gamma);
                    let w = dirs.map(|[(s1, t1), (s2, t2)]| {
                        let m1 = comb(&s1, &c, &t1, &d);
                        let m2 = comb(&s2, &c, &t2, &d);
                        let (mu1, u1) = rank_one_factor(&m1);
                        let (mu2, u2) = rank_one_factor(&m2);
                        let p = [[&s1 / &mu1, &s2 / &mu2], [&t1 / &mu1, &t2 / &mu2]];
                        witness(&p, &adapted_basis(&u1, Some(&u2)))
                    });
                    Ok(out(4, None, w))
                }
                QuadraticClass::RankOneNeg => {
                    let (s2, t2) = if alpha.is_zero() { (o.clone(), z.clone()) } else { (-&beta, &alpha * q(2)) };
                    let m2 = comb(&s2, &c, &t2, &d);
                    let (mu, u) = rank_one_factor(&m2);
                    let (sn, tn) = if t2.is_zero() { (z.clone(), o.clone()) } else { (o.clone(), z.clone()) };
                    let n = comb(&sn, &c, &tn, &d);
                    let x = adapted_basis(&u, None);
                    let nx = congruent(&n, &x);
                    let (n11, n12) = (&nx[0][0] / &mu, nx[0][1].clone());
                    let p = [[(&sn - &n11 * &s2) / &n12, &s2 / &mu], [(&tn - &n11 * &t2) / &n12, &t2 / &mu]];
                    Ok(out(3, None, Some(witness(&p, &x))))
                }
                QuadraticClass::NegDef => Ok(out(6, None, negdef_witness(&c, &d))),
                other => unreachable!("a plane of 2x2 symmetric matrices cannot have determinant form {other:?}"),
            }
        }
    }
}

/// `(a, b)` with `C = a·M`, `D = b·M` where `M = C` (C nonzero, D ∥ C).
fn scalar_ratio(c: &M2, d: &M2) -> (Q, Q) {
    let (i, j) = [(0, 0), (0, 1), (1, 1)].into_iter().find(|&(i, j)| !c[i][j].is_zero()).expect("nonzero");
    (Q::one(), &d[i][j] / &c[i][j])
}

/// Rational roots `(s, t)` of `α s² + β st + γ t²`, if both are rational.
fn isotropic_directions(alpha: &Q, beta: &Q, gamma: &Q) -> Option<[(Q, Q); 2]> {
    let (o, z) = (Q::one(), Q::zero());
    if alpha.is_zero() {
        return Some([(o, z), (-gamma, beta.clone())]);
    }
    let root = rational_sqrt(&(beta * beta - alpha * gamma * q(4)))?;
    let two_a = alpha * q(2);
    Some([((-beta + &root) / &two_a, o.clone()), ((-beta - &root) / &two_a, o)])
}

/// Congruence into the trace-free plane, which then contains both targets.
fn negdef_witness(c: &M2, d: &M2) -> Option<CongruenceWitness<Q>> {
    let (o, z) = (Q::one(), Q::zero());
    let eqs = Matrix::from_rows(vec![
        vec![c[0][0].clone(), &c[0][1] * q(2), c[1][1].clone()],
        vec![d[0][0].clone(), &d[0][1] * q(2), d[1][1].clone()],
    ]);
    let g = eqs.nullspace().pop()?;
    let sign = if g[0].is_positive() { o.clone() } else { -o.clone() };
    let (g11, g12, g22) = (&g[0] * &sign, &g[1] * &sign, &g[2] * &sign);
    let g2 = &g22 - &g12 * &g12 / &g11;
    let k = rational_sqrt(&(&g2 / &g11))?;
    let l: M2 = [[o.clone(), z.clone()], [&g12 / &g11, o.clone()]];
    let x = mul2(&l, &[[o.clone(), z.clone()], [z, k]]);
    let (nc, nd) = (congruent(c, &x), congruent(d, &x));
    let coords: M2 = [[nc[0][0].clone(), nd[0][0].clone()], [nc[0][1].clone(), nd[0][1].clone()]];
    Some(witness(&inverse2(&coords), &x))
}

/// Invariants of a 3×3 pencil.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct N3Invariants {
    /// `rank dA(0)`: dimension of the span of `C, D` in `Sym₃`.
    pub image_rank: usize,
    /// Rank of `C s + D t` at a generic point.
    pub generic_rank: usize,
    /// `j³det A`, a binary cubic.
    pub det_cubic: String,
}

pub fn one_jet_invariants_n3(c: &[Vec<Q>], d: &[Vec<Q>]) -> Result<N3Invariants, PencilError> {
    if c.len() != 3 || d.len() != 3 || c.iter().chain(d).any(|r| r.len() != 3) {
        return Err(PencilError::Shape { expected: 3 });
    }
    let flat = |m: &[Vec<Q>]| -> Vec<Q> { (0..3).flat_map(|i| (i..3).map(move |j| m[i][j].clone())).collect() };
    let image_rank = Matrix::from_rows(vec![flat(c), flat(d)]).rank();
    // a nonzero minor of degree ≤ 3 vanishes on at most 3 lines
    let points = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2)];
    let generic_rank = points
        .iter()
        .map(|&(s, t)| {
            let m: Vec<Vec<Q>> = (0..3).map(|i| (0..3).map(|j| &c[i][j] * q(s) + &d[i][j] * q(t)).collect()).collect();
            Matrix::from_rows(m).rank()
        })
        .max()
        .unwrap_or(0);
    let det_cubic = pencil_matrix(c, d).det().to_string();
    Ok(N3Invariants { image_rank, generic_rank, det_cubic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use crate::scalar::qr;

    fn m(a: i64, b: i64, c: i64) -> Vec<Vec<Q>> {
        vec![vec![q(a), q(b)], vec![q(b), q(c)]]
    }

    fn quad(s: &str) -> QuadraticClass {
        classify_quadratic(&parse_polynomial(s, 2).unwrap()).unwrap()
    }

    fn check(c: Vec<Vec<Q>>, d: Vec<Vec<Q>>, class_id: u8) {
        let got = classify_one_jet(&c, &d).unwrap();
        assert_eq!(got.class_id, class_id, "{c:?} {d:?}");
        let w = got.witness.expect("rational witness");
        let (rc, rd) = representative(class_id, got.sign.unwrap_or(1));
        let v = w.verify(&pencil_matrix(&c, &d), &pencil_matrix(&rc, &rd), 1).unwrap();
        assert!(v.holds, "witness fails for {c:?} {d:?}");
    }

    #[test]
    fn quadratic_classes() {
        assert_eq!(quad("-x1^2-x2^2"), QuadraticClass::NegDef);
        assert_eq!(quad("x1*x2"), QuadraticClass::Indefinite);
        assert_eq!(quad("0"), QuadraticClass::Zero);
        assert_eq!(quad("-x1^2"), QuadraticClass::RankOneNeg);
        assert_eq!(quad("x1^2 + 2*x1*x2 + x2^2"), QuadraticClass::RankOnePos);
        assert_eq!(quad("x1^2 + x2^2"), QuadraticClass::PosDef);
        assert!(classify_quadratic(&parse_polynomial("x1^3", 2).unwrap()).is_err());
        assert!(classify_quadratic(&parse_polynomial("x1", 2).unwrap()).is_err());
    }

    #[test]
    fn representatives_classify_to_themselves() {
        for (id, sign) in [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (5, -1), (6, 1)] {
            let (c, d) = representative(id, sign);
            check(c, d, id);
        }
        let (c, d) = representative(5, -1);
        assert_eq!(classify_one_jet(&c, &d).unwrap().sign, Some(-1));
    }

    #[test]
    fn table_examples() {
        check(m(0, 0, 0), m(0, 0, 0), 1);
        check(m(1, 0, 0), m(0, 0, 1), 4);
        // class 6 representative moved by X = [[1,2],[0,1]] and (x1,x2) -> (x1+x2, x2)
        let a = pencil_matrix(&m(1, 0, -1), &m(0, 1, 0));
        let w = CongruenceWitness::linear(&[vec![q(1), q(1)], vec![q(0), q(1)]], &[vec![q(1), q(2)], vec![q(0), q(1)]]);
        let (c, d) = linear_coefficients(&w.apply(&a, None));
        check(c, d, 6);
    }

    #[test]
    fn irrational_reductions_have_no_witness() {
        let got = classify_one_jet(&m(1, 0, -2), &m(0, 1, 0)).unwrap();
        assert_eq!((got.class_id, got.witness.is_none()), (6, true));
        let got = classify_one_jet(&m(1, 0, 2), &m(0, 0, 0)).unwrap();
        assert_eq!((got.class_id, got.sign, got.witness.is_none()), (5, Some(1), true));
        let got = classify_one_jet(&m(1, 0, -2), &m(0, 0, 0)).unwrap();
        assert_eq!((got.class_id, got.sign), (5, Some(-1)));
        check(m(3, 0, 0), m(0, 0, 0), 2);
        check(m(2, 1, 2), m(1, 0, 0), 4);
        check(vec![vec![qr(1, 2), q(0)], vec![q(0), q(0)]], m(0, 0, 0), 2);
    }

    #[test]
    fn n3_invariants() {
        let z = vec![vec![q(0); 3]; 3];
        let diag = |a: i64, b: i64, c: i64| vec![vec![q(a), q(0), q(0)], vec![q(0), q(b), q(0)], vec![q(0), q(0), q(c)]];
        let inv = one_jet_invariants_n3(&diag(1, 0, 1), &diag(0, 1, -1)).unwrap();
        assert_eq!((inv.image_rank, inv.generic_rank), (2, 3));
        assert_eq!(one_jet_invariants_n3(&z, &z).unwrap().image_rank, 0);
        let c6 = vec![vec![q(0), q(0), q(1)], vec![q(0), q(1), q(0)], vec![q(1), q(0), q(0)]];
        let d6 = vec![vec![q(0), q(1), q(0)], vec![q(1), q(0), q(0)], vec![q(0), q(0), q(0)]];
        assert_eq!(one_jet_invariants_n3(&c6, &d6).unwrap().image_rank, 2);
    }
}
