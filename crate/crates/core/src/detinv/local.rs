use serde::Serialize;

use crate::linalg::{JetCoords, JetSubspace, Matrix};
use crate::polyring::{Monomial, Polynomial};
use crate::scalar::Scalar;
use crate::Q;

/// Dimension of a local algebra `R/I`, read off from truncations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalAlgebraReport {
    /// `dim R/I` when stabilized, otherwise a lower bound.
    pub dimension: usize,
    pub stabilized: bool,
    /// Smallest `d` with `m^d ⊂ I + m^(d+1)`, hence `m^d ⊂ I`.
    pub certificate_degree: Option<u32>,
    /// `(d, dim R/(I + m^(d+1)))`.
    pub trace: Vec<(u32, usize)>,
    /// `Π (1/wᵢ − 1)` for weights making the function weighted homogeneous
    /// of degree one (Milnor numbers only).
    pub product_formula: Option<String>,
}

impl LocalAlgebraReport {
    pub fn exact(&self) -> Option<usize> {
        self.stabilized.then_some(self.dimension)
    }
}

/// Truncated span of `I + m^(d+1)` in the jets of degree `≤ d`.
fn ideal_jets<S: Scalar>(generators: &[Polynomial<S>], nvars: usize, d: u32) -> (JetCoords, JetSubspace<S>) {
    let coords = JetCoords::new(1, nvars, 0, d);
    let mut space = JetSubspace::new(coords.len());
    for g in generators {
        let lo = g.order().unwrap_or(d + 1);
        if lo > d {
            continue;
        }
        for m in Monomial::up_to_degree(nvars, 0, d - lo) {
            space.insert(coords.encode_poly(&g.mul_monomial(&m))).expect("encoded in own coordinates");
        }
    }
    (coords, space)
}

/// `dim R/I` for `I` generated by `generators` in the local ring at the
/// origin. Stabilizes exactly when `I` has finite colength; the certificate
/// is the Nakayama inclusion `m^d ⊂ I + m^(d+1)`.
pub fn local_algebra_dim<S: Scalar>(generators: &[Polynomial<S>], nvars: usize, dmax: u32) -> LocalAlgebraReport {
    let mut trace = Vec::new();
    for d in 0..=dmax {
        let (coords, space) = ideal_jets(generators, nvars, d);
        let q = space.quotient_dim();
        trace.push((d, q));
        let start = coords.degree_start(d);
        if space.tail(start).dim() == coords.len() - start {
            return LocalAlgebraReport {
                dimension: q,
                stabilized: true,
                certificate_degree: Some(d),
                trace,
                product_formula: None,
            };
        }
    }
    let dimension = trace.last().map_or(0, |&(_, q)| q);
    LocalAlgebraReport { dimension, stabilized: false, certificate_degree: None, trace, product_formula: None }
}

/// Weights `w` with every monomial of `f` of weighted degree one. Taken
/// from the unique solution when there is one, otherwise from the standard
/// grading when `f` is homogeneous.
pub fn homogeneity_weights(f: &Polynomial<Q>) -> Option<Vec<Q>> {
    let r = f.nvars();
    let rows: Vec<Vec<Q>> = f
        .terms()
        .map(|(m, _)| m.exponents().iter().map(|&e| Q::from_integer(e.into())).chain([Q::from_integer(1.into())]).collect())
        .collect();
    if rows.is_empty() {
        return None;
    }
    let rref = Matrix::from_rows(rows).rref();
    if rref.pivots.contains(&r) {
        return None;
    }
    let w: Vec<Q> = if rref.pivots.len() == r {
        (0..r).map(|i| rref.matrix[(i, r)].clone()).collect()
    } else {
        let degrees: Vec<u32> = f.terms().map(|(m, _)| m.degree()).collect();
        if degrees.iter().any(|&d| d != degrees[0]) || degrees[0] == 0 {
            return None;
        }
        vec![Q::new(1.into(), degrees[0].into()); r]
    };
    w.iter().all(|x| x > &Q::from_integer(0.into())).then_some(w)
}

/// Milnor number of `f` at the origin: `dim R/(∂f/∂x₁, …, ∂f/∂x_r)`.
/// Non-isolated singularities never stabilize.
pub fn milnor_number(f: &Polynomial<Q>, dmax: u32) -> LocalAlgebraReport {
    let r = f.nvars();
    let partials: Vec<Polynomial<Q>> = (0..r).map(|i| f.partial(i)).collect();
    let mut report = local_algebra_dim(&partials, r, dmax);
    report.product_formula = homogeneity_weights(f).map(|w| {
        let one = Q::from_integer(1.into());
        w.iter().fold(one.clone(), |acc, wi| acc * (one.clone() / wi - one.clone())).to_string()
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Polynomial<Q> {
        parse_polynomial(s, 2).unwrap()
    }

    fn mu(s: &str) -> LocalAlgebraReport {
        milnor_number(&p(s), 24)
    }

    #[test]
    fn morse_point() {
        let r = mu("x1*x2");
        assert_eq!(r.exact(), Some(1));
        assert_eq!(r.product_formula.as_deref(), Some("1"));
    }

    #[test]
    fn a_series_matches_product_formula() {
        for m in 2..=7 {
            for s in ["+", "-"] {
                let r = mu(&format!("x1^2 {s} x2^{m}"));
                assert_eq!(r.exact(), Some(m as usize - 1));
                assert_eq!(r.product_formula, Some((m - 1).to_string()));
            }
        }
    }

    #[test]
    fn non_isolated_never_stabilizes() {
        let r = milnor_number(&p("x1^2"), 8);
        assert!(!r.stabilized);
        assert_eq!(r.exact(), None);
    }

    #[test]
    fn trace_is_monotone() {
        let r = mu("x1^3 + x1*x2^3");
        assert!(r.trace.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(r.exact(), Some(7));
        assert_eq!(r.product_formula.as_deref(), Some("7"));
    }

    #[test]
    fn unit_ideal_is_zero() {
        let r = local_algebra_dim(&[p("1 + x1")], 2, 3);
        assert_eq!(r.exact(), Some(0));
    }
}
