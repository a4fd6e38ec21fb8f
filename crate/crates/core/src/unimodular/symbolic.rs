//! Coefficient arguments about self-equivalences `A∘Φ = XᵀAX` with
//! indeterminate jet coefficients, used to show that every such `Φ`
//! preserves orientation.

use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::polyring::{Monomial, Polynomial};
use crate::{Poly, Sym, Q};

/// `C = A∘Φ − XᵀAX` with `Φ` and `X` replaced by jets whose coefficients
/// are unknowns, expanded up to a fixed degree in `x`.
///
/// The ring of a residual entry has the `r` coordinates first and then one
/// variable per unknown. Unknowns are named `phi{i}[m]` (coefficient of `m`
/// in `Φᵢ`) and `X{p}{q}[m]` (coefficient of `m` in `X_pq`, `m = 1` for the
/// value at the origin), indices from 1.
pub struct GenericSelfMap {
    pub r: usize,
    pub n: usize,
    pub degree: u32,
    pub names: Vec<String>,
    residual: Vec<Poly>,
}

fn x_degree(m: &Monomial, r: usize) -> u32 {
    m.exponents()[..r].iter().sum()
}

fn mul_cut(a: &Poly, b: &Poly, r: usize, d: u32) -> Poly {
    let mut terms = Vec::new();
    for (ma, ca) in a.terms() {
        let da = x_degree(ma, r);
        for (mb, cb) in b.terms() {
            if da + x_degree(mb, r) <= d {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
    }
    Polynomial::from_terms(a.nvars(), terms)
}

fn compose_cut(p: &Poly, phi: &[Poly], r: usize, d: u32) -> Poly {
    let total = phi[0].nvars();
    let mut out = Polynomial::zero(total);
    for (m, c) in p.terms() {
        let mut t = Polynomial::constant(total, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                t = mul_cut(&t, &phi[i], r, d);
            }
        }
        out = &out + &t;
    }
    out
}

fn show_monomial_in_x(m: &Monomial) -> String {
    Polynomial::<Q>::term(m.clone(), Q::one()).to_string()
}

impl GenericSelfMap {
    /// `Φ` gets coefficients in degrees `1..=degree` and `X` in
    /// `0..degree`, which is all the expansion up to `degree` depends on.
    pub fn new(a: &Sym, degree: u32) -> Self {
        let (r, n) = (a.nvars(), a.n());
        let phi_monos = Monomial::up_to_degree(r, 1, degree);
        let x_monos = Monomial::up_to_degree(r, 0, degree.saturating_sub(1));
        let mut names = Vec::new();
        for i in 0..r {
            for m in &phi_monos {
                names.push(format!("phi{}[{}]", i + 1, show_monomial_in_x(m)));
            }
        }
        for p in 0..n {
            for q in 0..n {
                for m in &x_monos {
                    names.push(format!("X{}{}[{}]", p + 1, q + 1, show_monomial_in_x(m)));
                }
            }
        }
        let total = r + names.len();
        let slot = |k: usize, m: &Monomial| {
            let mut e = m.extend(total).exponents().to_vec();
            e[r + k] += 1;
            Polynomial::term(Monomial::new(e), Q::one())
        };
        let mut k = 0;
        let mut phi = vec![Polynomial::zero(total); r];
        for f in phi.iter_mut() {
            for m in &phi_monos {
                *f = &*f + &slot(k, m);
                k += 1;
            }
        }
        let mut x = vec![vec![Polynomial::zero(total); n]; n];
        for row in x.iter_mut() {
            for e in row.iter_mut() {
                for m in &x_monos {
                    *e = &*e + &slot(k, m);
                    k += 1;
                }
            }
        }
        let lifted: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).extend_vars(total)).collect()).collect();
        let mut residual = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut acc = compose_cut(a.get(i, j), &phi, r, degree);
                for k in 0..n {
                    for l in 0..n {
                        if lifted[k][l].is_zero() {
                            continue;
                        }
                        let t = mul_cut(&mul_cut(&x[k][i], &lifted[k][l], r, degree), &x[l][j], r, degree);
                        acc = &acc - &t;
                    }
                }
                residual.push(acc);
            }
        }
        GenericSelfMap { r, n, degree, names, residual }
    }

    pub fn nunknowns(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The unknown with the given name as a polynomial in the unknowns.
    pub fn unknown(&self, name: &str) -> Option<Poly> {
        self.index_of(name).map(|i| Polynomial::var(self.nunknowns(), i))
    }

    /// Coefficient of `x^m` in `C_ij` (zero-based, either order), a
    /// polynomial in the unknowns that vanishes for every self-equivalence.
    pub fn equation(&self, i: usize, j: usize, m: &Monomial) -> Poly {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let idx = i * self.n - i * (i + 1) / 2 + j;
        self.residual[idx].coefficient_of(m)
    }

    /// All nonzero coefficient equations, by degree, then entry, then
    /// monomial.
    pub fn equations(&self) -> Vec<((usize, usize), Monomial, Poly)> {
        let mut out = Vec::new();
        for m in Monomial::up_to_degree(self.r, 1, self.degree) {
            for i in 0..self.n {
                for j in i..self.n {
                    let e = self.equation(i, j, &m);
                    if !e.is_zero() {
                        out.push(((i, j), m.clone(), e));
                    }
                }
            }
        }
        out
    }

    fn square_det(&self, entry: impl Fn(usize, usize) -> String, size: usize) -> Poly {
        let k = self.nunknowns();
        let rows: Vec<Vec<Poly>> = (0..size)
            .map(|i| (0..size).map(|j| Polynomial::var(k, self.index_of(&entry(i, j)).expect("slot exists"))).collect())
            .collect();
        poly_det(&rows)
    }

    /// `det dΦ(0)`.
    pub fn jacobian_det(&self) -> Poly {
        self.square_det(|i, j| format!("phi{}[x{}]", i + 1, j + 1), self.r)
    }

    /// `det X(0)`.
    pub fn x0_det(&self) -> Poly {
        self.square_det(|i, j| format!("X{}{}[1]", i + 1, j + 1), self.n)
    }

    /// Prints a polynomial in the unknowns using their names.
    pub fn show(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().rev().enumerate() {
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
                .collect();
            let mag = c.abs();
            let body = match (factors.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => factors.join("*"),
                (false, false) => format!("{mag}*{}", factors.join("*")),
            };
            let neg = c.is_negative();
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

fn poly_det(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut out = Polynomial::zero(rows[0][0].nvars());
    for c in 0..n {
        let minor: Vec<Vec<Poly>> = rows[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let t = &rows[0][c] * &poly_det(&minor);
        out = if c % 2 == 0 { &out + &t } else { &out - &t };
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BranchOutcome {
    /// The case assumptions are inconsistent with an invertible
    /// self-equivalence.
    Impossible(String),
    /// `det dΦ(0)` has a forced sign in this case.
    Sign { sign: i8, jacobian: String },
    /// No rule applies and the sign of `det dΦ(0)` is not visible.
    Undetermined { jacobian: String, remaining: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub assumptions: Vec<String>,
    /// Eliminations in the order performed, as `c·M·u = −R`.
    pub derivations: Vec<String>,
    pub outcome: BranchOutcome,
}

/// Case analysis of `det dΦ(0)` over all self-equivalences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationProof {
    pub degree: u32,
    pub branches: Vec<Branch>,
}

impl OrientationProof {
    /// Every consistent case forces `det dΦ(0) > 0`.
    pub fn preserves_orientation(&self) -> bool {
        let mut any = false;
        for b in &self.branches {
            match b.outcome {
                BranchOutcome::Impossible(_) => {}
                BranchOutcome::Sign { sign, .. } if sign > 0 => any = true,
                _ => return false,
            }
        }
        any
    }
}

#[derive(Clone)]
struct State {
    eqs: Vec<Poly>,
    jac: Poly,
    xdet: Poly,
    nonzero: BTreeSet<usize>,
    signs: SignFacts,
    assumptions: Vec<String>,
    derivations: Vec<String>,
}

fn strip(m: &Monomial, v: usize) -> (u32, Monomial) {
    let mut e = m.exponents().to_vec();
    let a = e[v];
    e[v] = 0;
    (a, Monomial::new(e))
}

fn without(p: &Poly, v: usize) -> Poly {
    Polynomial::from_terms(
        p.nvars(),
        p.terms().filter(|(m, _)| m.exponents()[v] == 0).map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Rewrites `p` using `coeff·u = rest`, multiplying by `coeff^a` where `a` is
/// the largest power of `u` (rounded up to even when `even`).
fn eliminate(p: &Poly, u: usize, coeff: &Poly, rest: &Poly, even: bool) -> Poly {
    let mut parts: Vec<Poly> = Vec::new();
    for (m, c) in p.terms() {
        let (a, base) = strip(m, u);
        while parts.len() <= a as usize {
            parts.push(Polynomial::zero(p.nvars()));
        }
        parts[a as usize].add_term(base, c.clone());
    }
    let top = parts.len().saturating_sub(1) as u32;
    if top == 0 {
        return p.clone();
    }
    let top = if even && top % 2 == 1 { top + 1 } else { top };
    let mut out = Polynomial::zero(p.nvars());
    for (j, part) in parts.iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let t = &(part * &rest.pow(j as u32)) * &coeff.pow(top - j as u32);
        out = &out + &t;
    }
    out
}

/// Known signs of products of unknowns. A fact `(S, σ)` says that the
/// product of the unknowns in `S` has sign `σ`; facts combine by symmetric
/// difference, so implied signs are found by elimination over GF(2).
#[derive(Clone, Default)]
struct SignFacts {
    /// Reduced rows: pivot unknown, support, sign.
    rows: Vec<(usize, BTreeSet<usize>, i8)>,
}

impl SignFacts {
    fn reduce(&self, mut support: BTreeSet<usize>) -> (BTreeSet<usize>, i8) {
        let mut sign = 1;
        for (pivot, row, s) in &self.rows {
            if support.contains(pivot) {
                support = support.symmetric_difference(row).copied().collect();
                sign *= s;
            }
        }
        (support, sign)
    }

    fn sign_of(&self, support: &BTreeSet<usize>) -> Option<i8> {
        let (rest, sign) = self.reduce(support.clone());
        rest.is_empty().then_some(sign)
    }

    /// Adds a fact; `Err` on a contradiction, `Ok(false)` if already implied.
    fn add(&mut self, support: BTreeSet<usize>, sign: i8) -> Result<bool, ()> {
        let (rest, implied) = self.reduce(support);
        if rest.is_empty() {
            return if implied == sign { Ok(false) } else { Err(()) };
        }
        let pivot = *rest.iter().next().expect("nonempty");
        let sign = sign * implied;
        for (_, row, s) in self.rows.iter_mut() {
            if row.contains(&pivot) {
                *row = row.symmetric_difference(&rest).copied().collect();
                *s *= sign;
            }
        }
        self.rows.push((pivot, rest, sign));
        Ok(true)
    }
}

fn odd_support(m: &Monomial) -> BTreeSet<usize> {
    m.exponents().iter().enumerate().filter(|&(_, &e)| e % 2 == 1).map(|(i, _)| i).collect()
}

/// Sign of `p` when every term has a determined sign and they agree. Since
/// the caller knows `p ≠ 0`, this is the sign of `p`.
fn visible_sign(p: &Poly, facts: &SignFacts) -> Option<i8> {
    let mut sign = None;
    for (m, c) in p.terms() {
        let s = facts.sign_of(&odd_support(m))? * if c.is_positive() { 1 } else { -1 };
        if sign.is_some_and(|t| t != s) {
            return None;
        }
        sign = Some(s);
    }
    sign
}

enum Move {
    Done(BranchOutcome),
    Split(Vec<(usize, bool)>),
    Continue,
}

impl State {
    fn set_zero(&mut self, v: usize) {
        for e in self.eqs.iter_mut() {
            *e = without(e, v);
        }
        self.jac = without(&self.jac, v);
        self.xdet = without(&self.xdet, v);
    }

    fn solve(&mut self, g: &GenericSelfMap, u: usize, coeff: Poly, rest: Poly) {
        self.derivations.push(format!("{} * {} = {}", g.show(&coeff), g.names[u], g.show(&rest)));
        for e in self.eqs.iter_mut() {
            *e = eliminate(e, u, &coeff, &rest, false);
        }
        self.jac = eliminate(&self.jac, u, &coeff, &rest, true);
        self.xdet = eliminate(&self.xdet, u, &coeff, &rest, false);
    }

    /// `coeff·u + rest = 0` with `u` linear and `coeff` a constant times a
    /// monomial in unknowns known to be nonzero.
    fn linear_in(&self, e: &Poly, u: usize) -> Option<(Poly, Poly)> {
        let mut coeff = Polynomial::zero(e.nvars());
        for (m, c) in e.terms() {
            let (a, base) = strip(m, u);
            match a {
                0 => {}
                1 => coeff.add_term(base, c.clone()),
                _ => return None,
            }
        }
        let terms: Vec<_> = coeff.terms().collect();
        let [(m, _)] = terms[..] else { return None };
        let ok = m.exponents().iter().enumerate().all(|(i, &x)| x == 0 || self.nonzero.contains(&i));
        ok.then(|| (coeff.clone(), -&without(e, u)))
    }

    fn open_vars(&self, m: &Monomial) -> Vec<usize> {
        (0..m.nvars()).filter(|&i| m.exponents()[i] > 0 && !self.nonzero.contains(&i)).collect()
    }

    fn step(&mut self, g: &GenericSelfMap) -> Move {
        if self.jac.is_zero() {
            return Move::Done(BranchOutcome::Impossible("det dΦ(0) = 0".into()));
        }
        if self.xdet.is_zero() {
            return Move::Done(BranchOutcome::Impossible("det X(0) = 0".into()));
        }
        for e in &self.eqs {
            if e.degree() == Some(0) {
                return Move::Done(BranchOutcome::Impossible(format!("{} = 0", g.show(e))));
            }
        }
        for e in &self.eqs {
            let terms: Vec<_> = e.terms().collect();
            if let [(m, _)] = terms[..] {
                let open = self.open_vars(m);
                if open.is_empty() {
                    return Move::Done(BranchOutcome::Impossible(format!("{} = 0", g.show(e))));
                }
                // v1 = 0 | v1 ≠ 0, v2 = 0 | ...
                return Move::Split(open.iter().map(|&v| (v, true)).collect());
            }
        }
        // an invertible map has det dΦ(0) and det X(0) nonzero
        for d in [&self.jac, &self.xdet] {
            let terms: Vec<_> = d.terms().collect();
            if let [(m, _)] = terms[..] {
                let fresh = self.open_vars(m);
                if !fresh.is_empty() {
                    self.nonzero.extend(fresh);
                    return Move::Continue;
                }
            }
        }
        for e in &self.eqs {
            let terms: Vec<_> = e.terms().collect();
            if let [(a, ca), (b, cb)] = terms[..] {
                // ca·a = −cb·b, so one side vanishes only with the other
                let (open_a, open_b) = (self.open_vars(a), self.open_vars(b));
                if !open_a.is_empty() && !open_b.is_empty() {
                    continue;
                }
                let sign = if (-(cb / ca)).is_positive() { 1 } else { -1 };
                let support: BTreeSet<usize> = odd_support(a).symmetric_difference(&odd_support(b)).copied().collect();
                if support.is_empty() && sign < 0 {
                    return Move::Done(BranchOutcome::Impossible(format!("{} = 0", g.show(e))));
                }
                let added = match self.signs.add(support, sign) {
                    Ok(added) => added,
                    Err(()) => return Move::Done(BranchOutcome::Impossible(format!("sign of {} = 0", g.show(e)))),
                };
                if added || !open_a.is_empty() || !open_b.is_empty() {
                    self.nonzero.extend(open_a.into_iter().chain(open_b));
                    return Move::Continue;
                }
            }
        }
        for monomial_ok in [false, true] {
            for e in self.eqs.clone() {
                for u in 0..g.nunknowns() {
                    if e.terms().all(|(m, _)| m.exponents()[u] == 0) {
                        continue;
                    }
                    if let Some((coeff, rest)) = self.linear_in(&e, u) {
                        if !monomial_ok && coeff.degree() != Some(0) {
                            continue;
                        }
                        self.solve(g, u, coeff, rest);
                        return Move::Continue;
                    }
                }
            }
        }
        let jacobian = g.show(&self.jac);
        Move::Done(match visible_sign(&self.jac, &self.signs) {
            Some(sign) => BranchOutcome::Sign { sign, jacobian },
            None => BranchOutcome::Undetermined {
                jacobian,
                remaining: self.eqs.iter().filter(|e| !e.is_zero()).map(|e| g.show(e)).collect(),
            },
        })
    }
}

fn run(g: &GenericSelfMap, mut st: State, out: &mut Vec<Branch>) {
    loop {
        match st.step(g) {
            Move::Continue => {}
            Move::Done(outcome) => {
                out.push(Branch { assumptions: st.assumptions, derivations: st.derivations, outcome });
                return;
            }
            Move::Split(vars) => {
                let mut prefix = st.clone();
                for (v, _) in vars {
                    let mut b = prefix.clone();
                    b.assumptions.push(format!("{} = 0", g.names[v]));
                    b.set_zero(v);
                    run(g, b, out);
                    prefix.assumptions.push(format!("{} != 0", g.names[v]));
                    prefix.nonzero.insert(v);
                }
                // every listed unknown nonzero contradicts the monomial equation
                return;
            }
        }
    }
}

/// Case analysis showing the sign of `det dΦ(0)` for every `(Φ, X)` with
/// `A∘Φ = XᵀAX` up to `degree`.
pub fn orientation_argument(a: &Sym, degree: u32) -> OrientationProof {
    let g = GenericSelfMap::new(a, degree);
    let eqs = g.equations().into_iter().map(|(_, _, e)| e).collect();
    let st = State {
        eqs,
        jac: g.jacobian_det(),
        xdet: g.x0_det(),
        nonzero: BTreeSet::new(),
        signs: SignFacts::default(),
        assumptions: Vec::new(),
        derivations: Vec::new(),
    };
    let mut branches = Vec::new();
    run(&g, st, &mut branches);
    OrientationProof { degree, branches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, SymMatrix};
    use num_traits::Zero;

    fn sym(rows: &[&[&str]]) -> Sym {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    fn mono(s: &str) -> Monomial {
        parse_polynomial::<Q>(s, 2).unwrap().terms().next().unwrap().0.clone()
    }

    #[test]
    fn residual_vanishes_on_the_identity() {
        let a = sym(&[&["x1", "0"], &["x1*x2 + x2^3"]]);
        let g = GenericSelfMap::new(&a, 2);
        // phi = id, X = I
        let k = g.nunknowns();
        let mut point = vec![Q::zero(); k];
        for name in ["phi1[x1]", "phi2[x2]", "X11[1]", "X22[1]"] {
            point[g.index_of(name).unwrap()] = Q::one();
        }
        for (_, _, e) in g.equations() {
            assert!(e.eval(&point).is_zero(), "{}", g.show(&e));
        }
    }

    #[test]
    fn reflection_is_not_excluded_for_a_diagonal_germ() {
        let p = orientation_argument(&sym(&[&["x1", "0"], &["x2"]]), 1);
        assert!(!p.preserves_orientation());
    }

    #[test]
    fn linear_equations_of_a_three_by_three_germ() {
        let a = SymMatrix::parse(3, 2, &[&["x1", "x2^2", "0"], &["x1", "0"], &["x2"]]).unwrap();
        let g = GenericSelfMap::new(&a, 2);
        let u = |n: &str| g.unknown(n).unwrap();
        let x2 = mono("x2");
        assert_eq!(g.equation(0, 1, &x2), -&(&u("X31[1]") * &u("X32[1]")));
        assert_eq!(g.equation(0, 0, &x2), &u("phi1[x2]") - &u("X31[1]").pow(2));
    }

    #[test]
    fn mirror_symmetric_germ_has_a_reversing_branch() {
        let p = orientation_argument(&sym(&[&["x1", "0"], &["x2"]]), 2);
        assert!(p.branches.iter().any(|b| matches!(b.outcome, BranchOutcome::Sign { sign: -1, .. })));
    }

    #[test]
    fn split_germs_preserve_orientation() {
        assert!(orientation_argument(&sym(&[&["x1", "0"], &["x1*x2 + x2^3"]]), 2).preserves_orientation());
        assert!(orientation_argument(&sym(&[&["x1", "x2^3"], &["x1*x2"]]), 2).preserves_orientation());
        assert!(orientation_argument(&sym(&[&["x1", "0"], &["-x1^2 + x2^3"]]), 3).preserves_orientation());
    }

    #[test]
    fn unsplit_germ_is_not_claimed() {
        let p = orientation_argument(&sym(&[&["x1", "0"], &["x2^2 + x1^3"]]), 3);
        assert!(!p.preserves_orientation());
    }

    #[test]
    fn sign_facts_combine_over_gf2() {
        let mut f = SignFacts::default();
        assert_eq!(f.add([0, 1].into(), -1), Ok(true));
        assert_eq!(f.add([1, 2].into(), 1), Ok(true));
        assert_eq!(f.sign_of(&[0, 2].into()), Some(-1));
        assert_eq!(f.add([0, 2].into(), -1), Ok(false));
        assert_eq!(f.add([0, 2].into(), 1), Err(()));
        assert_eq!(f.sign_of(&[0].into()), None);
    }
}
