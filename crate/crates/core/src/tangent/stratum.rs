use serde::Serialize;
use thiserror::Error;

use super::{orbit_tangent_dim_jet, tangent_space, GroupVariant};
use crate::linalg::Matrix;
use crate::polyring::{parse_polynomial, Polynomial, SymMatrix};
use crate::scalar::q;
use crate::{Poly, Q};

/// A polynomial family of `k`-jets `c ↦ j^k A_c`. The matrix lives in
/// `nvars + nparams` variables: the germ coordinates first, then the
/// parameters.
#[derive(Clone, Debug)]
pub struct JetFamily {
    pub matrix: SymMatrix<Q>,
    pub nvars: usize,
    pub nparams: usize,
    pub k: u32,
}

impl JetFamily {
    fn substitution(&self, c: &[Q]) -> Vec<Poly> {
        let mut subs: Vec<Poly> = (0..self.nvars).map(|i| Polynomial::var(self.nvars, i)).collect();
        subs.extend(c.iter().map(|v| Polynomial::constant(self.nvars, v.clone())));
        subs
    }

    pub fn at(&self, c: &[Q]) -> SymMatrix<Q> {
        let subs = self.substitution(c);
        self.matrix.map(|p| p.compose(&subs))
    }

    /// Velocity of the family at `c` along direction `t` in parameter space.
    pub fn derivative(&self, c: &[Q], t: &[Q]) -> SymMatrix<Q> {
        let subs = self.substitution(c);
        let mut out = SymMatrix::zero(self.matrix.n(), self.nvars);
        for (j, tj) in t.iter().enumerate() {
            if tj == &q(0) {
                continue;
            }
            let dj = self.matrix.map(|p| p.partial(self.nvars + j).compose(&subs).scale(tj));
            out = out.zip_map(&dj, |a, b| a + b);
        }
        out
    }
}

/// One smooth piece of a semialgebraic stratum: common zeros of
/// `equalities` where every polynomial in `nonzero` is nonzero.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub name: String,
    pub expected_dim: usize,
    pub equalities: Vec<Poly>,
    pub nonzero: Vec<Poly>,
    pub samples: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratumError {
    #[error("sample {sample} of stratum {stratum} does not satisfy its defining conditions")]
    SampleOutside { stratum: String, sample: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub name: String,
    pub expected_dim: usize,
    pub dims: Vec<usize>,
    pub constant: bool,
    pub matches: bool,
    /// Every tangent direction of the stratum at every sample lies in the
    /// orbit tangent space there.
    pub tangent_contained: bool,
}

impl StratumReport {
    pub fn passed(&self) -> bool {
        self.constant && self.matches && self.tangent_contained
    }
}

fn show(c: &[Q]) -> String {
    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Checks that the orbit tangent dimension is constant on each stratum's
/// samples, equals the declared value, and that the strata are tangent to
/// the orbits.
pub fn mather_stratum_check(family: &JetFamily, strata: &[Stratum]) -> Result<Vec<StratumReport>, StratumError> {
    let mut out = Vec::new();
    for s in strata {
        let mut dims = Vec::new();
        let mut tangent_contained = true;
        for c in &s.samples {
            let ok = s.equalities.iter().all(|e| e.eval(c) == q(0)) && s.nonzero.iter().all(|e| e.eval(c) != q(0));
            if !ok {
                return Err(StratumError::SampleOutside { stratum: s.name.clone(), sample: show(c) });
            }
            let jet = family.at(c);
            dims.push(orbit_tangent_dim_jet(&jet, family.k));
            let t = tangent_space(&jet.truncate(family.k), GroupVariant::Jet, family.k);
            for dir in stratum_directions(s, c, family.nparams) {
                if !t.contains_sym(&family.derivative(c, &dir).truncate(family.k)) {
                    tangent_contained = false;
                }
            }
        }
        let constant = dims.windows(2).all(|w| w[0] == w[1]);
        let matches = dims.iter().all(|&d| d == s.expected_dim);
        out.push(StratumReport {
            name: s.name.clone(),
            expected_dim: s.expected_dim,
            dims,
            constant,
            matches,
            tangent_contained,
        });
    }
    Ok(out)
}

/// Kernel of the Jacobian of the defining equalities at `c`.
fn stratum_directions(s: &Stratum, c: &[Q], nparams: usize) -> Vec<Vec<Q>> {
    if s.equalities.is_empty() {
        return (0..nparams).map(|j| (0..nparams).map(|i| if i == j { q(1) } else { q(0) }).collect()).collect();
    }
    let jac = Matrix::from_rows(
        s.equalities.iter().map(|e| (0..nparams).map(|j| e.partial(j).eval(c)).collect()).collect(),
    );
    jac.nullspace()
}

/// The family of 2-jets over the rank-one 1-jet `(x1, 0; 0, 0)`:
/// `(x1, c1 x2²; c1 x2², c2 x2² + c3 x1 x2 + c4 x1²)`.
pub fn table4_family() -> JetFamily {
    let m = SymMatrix::parse(2, 6, &[&["x1", "x3*x2^2"], &["x4*x2^2 + x5*x1*x2 + x6*x1^2"]]).expect("static family");
    JetFamily { matrix: m, nvars: 2, nparams: 4, k: 2 }
}

fn cpoly(s: &str) -> Poly {
    // parameters c1..c4 are written x1..x4 here
    parse_polynomial(s, 4).expect("static stratum polynomial")
}

fn pts(rows: &[[i64; 4]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

/// Strata of the parameter space of [`table4_family`], each split into its
/// smooth pieces, with three rational samples per piece.
pub fn table4_strata() -> Vec<Stratum> {
    let s = |name: &str, dim: usize, eq: &[&str], ne: &[&str], samples: &[[i64; 4]]| Stratum {
        name: name.to_string(),
        expected_dim: dim,
        equalities: eq.iter().map(|e| cpoly(e)).collect(),
        nonzero: ne.iter().map(|e| cpoly(e)).collect(),
        samples: pts(samples),
    };
    vec![
        s("2-1", 11, &[], &["x2", "-x3^2 + 4*x2*x4"], &[[0, 1, 0, 1], [0, -1, 0, 1], [1, 2, 1, 3]]),
        s("2-2a", 10, &["-x3^2 + 4*x2*x4"], &["x2"], &[[0, 1, 0, 0], [1, 1, 2, 1], [2, -1, 2, -1]]),
        s("2-2b", 10, &["x2"], &["x1*x3"], &[[1, 0, 1, 0], [-1, 0, 2, 3], [2, 0, -1, 1]]),
        s("2-3a", 9, &["x1", "x2"], &["x3"], &[[0, 0, 1, 0], [0, 0, -2, 1], [0, 0, 3, 5]]),
        s("2-3b", 9, &["x2", "x3"], &["x1*x4"], &[[1, 0, 0, 1], [-1, 0, 0, 2], [2, 0, 0, -3]]),
        s("2-4a", 8, &["x1", "x2", "x3"], &["x4"], &[[0, 0, 0, 1], [0, 0, 0, -1], [0, 0, 0, 2]]),
        s("2-4b", 8, &["x2", "x3", "x4"], &["x1"], &[[1, 0, 0, 0], [-1, 0, 0, 0], [3, 0, 0, 0]]),
        s("2-5", 7, &["x1", "x2", "x3", "x4"], &[], &[[0, 0, 0, 0]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_evaluation() {
        let f = table4_family();
        let a = f.at(&[q(0), q(1), q(0), q(1)]);
        assert_eq!(a.to_string(), "[x1, 0; 0, x1^2 + x2^2]");
        let v = f.derivative(&[q(0), q(1), q(0), q(1)], &[q(1), q(0), q(0), q(0)]);
        assert_eq!(v.to_string(), "[0, x2^2; x2^2, 0]");
    }

    #[test]
    fn rejects_bad_samples() {
        let mut strata = table4_strata();
        strata[0].samples = pts(&[[0, 0, 0, 1]]);
        assert!(mather_stratum_check(&table4_family(), &strata[..1]).is_err());
    }
}
