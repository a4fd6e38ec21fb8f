use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Monomial;
use crate::scalar::Scalar;

/// Sparse multivariate polynomial in `nvars` variables.
///
/// Zero coefficients are never stored, so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<S: Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The coordinate function `x_{i+1}` (zero-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), S::one())
    }

    pub fn term(mono: Monomial, c: S) -> Self {
        let nvars = mono.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a nonzero term (the order of vanishing).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `∂/∂x_{i+1}`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.exponents().to_vec();
            ex[i] -= 1;
            out.add_term(Monomial::new(ex), c.clone() * S::from_i64(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes `x_i ↦ subs[i]`. The result lives in the variable count of
    /// the substituted polynomials.
    pub fn compose(&self, subs: &[Polynomial<S>]) -> Self {
        assert_eq!(subs.len(), self.nvars, "one substitution per variable");
        let target = subs.first().map_or(self.nvars, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial<S>>> = subs.iter().map(|p| vec![Self::one(p.nvars), p.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Same as [`compose`](Self::compose) but drops terms above degree `d` at
    /// every step.
    pub fn compose_truncated(&self, subs: &[Polynomial<S>], d: u32) -> Self {
        let target = subs.first().map_or(self.nvars, |p| p.nvars);
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_truncated(&subs[i], d);
                }
            }
            out = &out + &t;
        }
        out
    }

    pub fn mul_truncated(&self, other: &Self, d: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > d {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > d {
                    continue;
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Every monomial `x^α` satisfies `⟨λ, α⟩ = w`. The zero polynomial is
    /// homogeneous of every weight.
    pub fn is_weighted_homogeneous(&self, weights: &[i64], w: i64) -> bool {
        self.terms.keys().all(|m| m.weighted_degree(weights) == w)
    }

    /// Common weighted degree if all terms share one.
    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Embeds into a ring with more variables (new variables appended).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self.terms.iter().map(|(m, c)| (m.extend(nvars), c.clone())).collect(),
        }
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Splits off the first `k` variables: returns the coefficient (a
    /// polynomial in the remaining variables) of `x^α` for a monomial `α` in
    /// the first `k` variables.
    pub fn coefficient_of(&self, head: &Monomial) -> Polynomial<S> {
        let k = head.nvars();
        let rest = self.nvars - k;
        let mut out = Polynomial::zero(rest);
        for (m, c) in &self.terms {
            if m.exponents()[..k] == *head.exponents() {
                out.add_term(Monomial::new(m.exponents()[k..].to_vec()), c.clone());
            }
        }
        out
    }
}

impl<'a, S: Scalar> Add for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Sub for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Scalar> Mul for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Self) -> Polynomial<S> {
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<'a, S: Scalar> Neg for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<S: Scalar> $tr for Polynomial<S> {
            type Output = Polynomial<S>;
            fn $f(self, rhs: Self) -> Polynomial<S> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        -&self
    }
}

/// Canonical form: descending graded-lex order, explicit `*`, rationals as
/// `p/q`.
impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};
    use crate::Q;

    fn x(i: usize) -> Polynomial<Q> {
        Polynomial::var(2, i)
    }

    #[test]
    fn printing_is_canonical() {
        let p = &(&x(0) * &x(1)) + &x(1).pow(3);
        assert_eq!(p.to_string(), "x2^3 + x1*x2");
        let r = &x(0).scale(&qr(-3, 4)) + &Polynomial::constant(2, q(2));
        assert_eq!(r.to_string(), "-3/4*x1 + 2");
        assert_eq!(Polynomial::<Q>::zero(2).to_string(), "0");
    }

    #[test]
    fn truncation_filters_degrees() {
        let p = &x(0) + &(&x(0) * &x(1).pow(2));
        assert_eq!(p.truncate(2), x(0));
        let r = &(&x(0) * &x(1)) + &x(1).pow(4);
        assert_eq!(r.truncate(4), r);
        assert_eq!(p.truncate(3).truncate(1), p.truncate(1));
    }

    #[test]
    fn partial_derivatives() {
        let p = &x(0).pow(2) * &x(1);
        assert_eq!(p.partial(0), (&x(0) * &x(1)).scale(&q(2)));
        assert!(Polynomial::<Q>::constant(2, q(5)).partial(1).is_zero());
    }

    #[test]
    fn composition_and_evaluation() {
        let p = &x(0).pow(2) - &x(1);
        let subs = vec![&x(0) + &x(1), x(1)];
        let c = p.compose(&subs);
        let expected = &(&(&x(0).pow(2) + &(&x(0) * &x(1)).scale(&q(2))) + &x(1).pow(2)) - &x(1);
        assert_eq!(c, expected);
        assert_eq!(p.eval(&[q(3), q(4)]), q(5));
        assert_eq!(p.compose_truncated(&subs, 1), (-&x(1)));
    }

    #[test]
    fn weighted_homogeneity() {
        let p = &x(0) + &x(1).pow(2);
        assert!(p.is_weighted_homogeneous(&[2, 1], 2));
        assert_eq!(p.weighted_degree(&[2, 1]), Some(2));
        assert_eq!(p.weighted_degree(&[1, 1]), None);
    }
}
