//! Fourier–Motzkin elimination for small systems of rational inequalities.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// `coeffs · t ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

impl Inequality {
    pub fn new(coeffs: Vec<Q>, rhs: Q) -> Self {
        Inequality { coeffs, rhs }
    }

    fn normalized(mut self) -> Self {
        // scale so the largest absolute coefficient (or the rhs) is one
        let scale = self.coeffs.iter().map(Signed::abs).max().filter(|m| !m.is_zero()).unwrap_or_else(|| self.rhs.abs());
        if !scale.is_zero() {
            for c in &mut self.coeffs {
                *c = &*c / &scale;
            }
            self.rhs = &self.rhs / &scale;
        }
        self
    }

    fn holds(&self, t: &[Q]) -> bool {
        let lhs: Q = self.coeffs.iter().zip(t).map(|(a, x)| a * x).sum();
        lhs >= self.rhs
    }
}

/// Eliminates the last variable.
fn eliminate_last(system: &[Inequality], k: usize) -> Vec<Inequality> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for c in system {
        let a = &c.coeffs[k];
        if a.is_positive() {
            pos.push(c);
        } else if a.is_negative() {
            neg.push(c);
        } else {
            out.push(Inequality::new(c.coeffs[..k].to_vec(), c.rhs.clone()));
        }
    }
    for p in &pos {
        for n in &neg {
            let (ap, an) = (p.coeffs[k].clone(), -n.coeffs[k].clone());
            let coeffs = (0..k).map(|i| &p.coeffs[i] * &an + &n.coeffs[i] * &ap).collect();
            out.push(Inequality::new(coeffs, &p.rhs * &an + &n.rhs * &ap).normalized());
        }
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(b.rhs.cmp(&a.rhs)));
    // among constraints with the same left side only the strongest matters
    out.dedup_by(|later, earlier| later.coeffs == earlier.coeffs);
    out
}

fn nice_in(lo: Option<&Q>, hi: Option<&Q>) -> Q {
    let zero = Q::zero();
    let ok = |x: &Q| lo.map_or(true, |l| x >= l) && hi.map_or(true, |h| x <= h);
    if ok(&zero) {
        return zero;
    }
    match (lo, hi) {
        (Some(l), _) if ok(&l.ceil()) => l.ceil(),
        (_, Some(h)) if ok(&h.floor()) => h.floor(),
        (Some(l), Some(h)) => (l + h) / Q::from_integer(2.into()),
        (Some(l), None) => l.clone(),
        (None, Some(h)) => h.clone(),
        (None, None) => zero,
    }
}

/// A point satisfying every inequality, or `None` if the system is
/// infeasible. Exact; intended for a handful of variables.
pub fn feasible_point(system: &[Inequality], nvars: usize) -> Option<Vec<Q>> {
    let mut levels = vec![system.iter().cloned().map(Inequality::normalized).collect::<Vec<_>>()];
    for k in (0..nvars).rev() {
        let next = eliminate_last(levels.last().unwrap(), k);
        levels.push(next);
    }
    if levels.last().unwrap().iter().any(|c| c.rhs.is_positive()) {
        return None;
    }
    // levels[nvars - j] only involves variables 0..j
    let mut t: Vec<Q> = Vec::with_capacity(nvars);
    for j in 0..nvars {
        let sys = &levels[nvars - j - 1];
        let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
        for c in sys {
            let a = &c.coeffs[j];
            if a.is_zero() {
                continue;
            }
            let rest: Q = c.coeffs[..j].iter().zip(&t).map(|(x, y)| x * y).sum();
            let bound = (&c.rhs - rest) / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        t.push(nice_in(lo.as_ref(), hi.as_ref()));
    }
    debug_assert!(system.iter().all(|c| c.holds(&t)));
    Some(t)
}

/// Smallest positive integer multiple of a rational vector, divided by the
/// gcd of its entries.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<num_bigint::BigInt> {
    let den = v.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}
