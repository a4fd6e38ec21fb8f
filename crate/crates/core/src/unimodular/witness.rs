use serde::Serialize;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyring::{PolyMatrix, Polynomial, SymMatrix};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("coordinate map has {got} components, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("coordinate map does not fix the origin")]
    MovesOrigin,
    #[error("linear part of the coordinate map is singular")]
    SingularJacobian,
    #[error("matrix family is singular at the origin")]
    SingularMatrix,
    #[error("matrix family is {rows}x{cols}, expected {n}x{n}")]
    Shape { rows: usize, cols: usize, n: usize },
}

/// A pair `(Φ, X)` acting by `A ↦ Xᵀ (A∘Φ) X`.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceWitness<S: Scalar> {
    pub phi: Vec<Polynomial<S>>,
    pub x: PolyMatrix<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub holds: bool,
    pub orientation_sign: i8,
}

impl<S: Scalar> CongruenceWitness<S> {
    pub fn identity(n: usize, nvars: usize) -> Self {
        CongruenceWitness { phi: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect(), x: PolyMatrix::identity(n, nvars) }
    }

    /// Linear `Φ(x) = P x` and constant `X`.
    pub fn linear(p: &[Vec<S>], x: &[Vec<S>]) -> Self {
        let nvars = p.len();
        let phi = p
            .iter()
            .map(|row| {
                let mut f = Polynomial::zero(nvars);
                for (j, c) in row.iter().enumerate() {
                    f = &f + &Polynomial::var(nvars, j).scale(c);
                }
                f
            })
            .collect();
        CongruenceWitness { phi, x: PolyMatrix::from_scalars(nvars, x) }
    }

    pub fn nvars(&self) -> usize {
        self.phi.len()
    }

    /// `∂Φᵢ/∂xⱼ (0)`.
    pub fn jacobian_at_origin(&self) -> Matrix<S> {
        let r = self.nvars();
        Matrix::from_rows(
            self.phi.iter().map(|f| (0..r).map(|j| f.partial(j).constant_term()).collect()).collect(),
        )
    }

    fn check(&self, n: usize) -> Result<(), WitnessError> {
        if self.x.rows() != n || self.x.cols() != n {
            return Err(WitnessError::Shape { rows: self.x.rows(), cols: self.x.cols(), n });
        }
        if self.phi.iter().any(|f| !f.constant_term().is_zero()) {
            return Err(WitnessError::MovesOrigin);
        }
        if self.jacobian_at_origin().det().is_zero() {
            return Err(WitnessError::SingularJacobian);
        }
        if Matrix::from_rows(self.x.at_origin()).det().is_zero() {
            return Err(WitnessError::SingularMatrix);
        }
        Ok(())
    }

    /// Sign of `det dΦ|₀`.
    pub fn orientation_sign(&self) -> i8 {
        let d = self.jacobian_at_origin().det();
        if d.is_positive() {
            1
        } else if d.is_negative() {
            -1
        } else {
            0
        }
    }

    /// `Xᵀ (A∘Φ) X`, truncated above degree `d` when given.
    pub fn apply(&self, a: &SymMatrix<S>, d: Option<u32>) -> SymMatrix<S> {
        let composed = match d {
            Some(d) => a.map(|p| p.compose_truncated(&self.phi, d)),
            None => a.compose(&self.phi),
        };
        let xt = self.x.transpose();
        let full = xt.mul_truncated(&composed.to_full(), d).mul_truncated(&self.x, d);
        SymMatrix::from_full(&full).expect("congruence preserves symmetry")
    }

    /// Checks `B = Xᵀ (A∘Φ) X` modulo terms of degree above `d`.
    pub fn verify(&self, a: &SymMatrix<S>, b: &SymMatrix<S>, d: u32) -> Result<Verification, WitnessError> {
        if self.phi.len() != a.nvars() {
            return Err(WitnessError::Arity { expected: a.nvars(), got: self.phi.len() });
        }
        self.check(a.n())?;
        let image = self.apply(a, Some(d));
        let holds = image == b.truncate(d);
        Ok(Verification { holds, orientation_sign: self.orientation_sign() })
    }

    /// Witness of the composite action: first `self`, then `other`.
    pub fn then(&self, other: &CongruenceWitness<S>) -> CongruenceWitness<S> {
        // Y = Xᵀ(A∘Φ)X, then Zᵀ(Y∘Ψ)Z = (X∘Ψ·Z)ᵀ (A∘Φ∘Ψ) (X∘Ψ·Z)
        let phi = self.phi.iter().map(|f| f.compose(&other.phi)).collect();
        let x_psi = self.x.map(|p| p.compose(&other.phi));
        CongruenceWitness { phi, x: x_psi.mul(&other.x) }
    }
}

impl<S: Scalar> CongruenceWitness<S> {
    /// `Φ = (−x1, x2, …)`, `X = I`: relates `A` and `Ā`.
    pub fn reflection(n: usize, nvars: usize) -> Self {
        let mut w = Self::identity(n, nvars);
        w.phi[0] = Polynomial::var(nvars, 0).scale(&-S::one());
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Q;

    fn sym(rows: &[&[&str]]) -> SymMatrix<Q> {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    #[test]
    fn swap_reverses_orientation() {
        let a = sym(&[&["x1", "0"], &["x2"]]);
        let w = CongruenceWitness::linear(&[vec![q(0), q(1)], vec![q(1), q(0)]], &[vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(w.verify(&a, &a, 4).unwrap(), Verification { holds: true, orientation_sign: -1 });
        let id = CongruenceWitness::identity(2, 2);
        assert_eq!(id.verify(&a, &a, 4).unwrap(), Verification { holds: true, orientation_sign: 1 });
    }

    #[test]
    fn rejects_degenerate_witnesses() {
        let a = sym(&[&["x1", "0"], &["x2"]]);
        let w = CongruenceWitness::linear(&[vec![q(1), q(1)], vec![q(1), q(1)]], &[vec![q(1), q(0)], vec![q(0), q(1)]]);
        assert_eq!(w.verify(&a, &a, 3), Err(WitnessError::SingularJacobian));
        let w = CongruenceWitness::linear(&[vec![q(1), q(0)], vec![q(0), q(1)]], &[vec![q(1), q(0)], vec![q(0), q(0)]]);
        assert_eq!(w.verify(&a, &a, 3), Err(WitnessError::SingularMatrix));
    }

    #[test]
    fn composite_acts_in_order() {
        let a = sym(&[&["x1", "x2"], &["x1^2"]]);
        let w1 = CongruenceWitness::linear(&[vec![q(1), q(2)], vec![q(0), q(1)]], &[vec![q(1), q(1)], vec![q(0), q(1)]]);
        let w2 = CongruenceWitness::linear(&[vec![q(0), q(1)], vec![q(-1), q(0)]], &[vec![q(2), q(0)], vec![q(1), q(1)]]);
        let step = w2.apply(&w1.apply(&a, None), None);
        assert_eq!(w1.then(&w2).apply(&a, None), step);
    }
}
