//! Invariants built from the determinant: `det∘A`, Milnor numbers, Koszul
//! homology of the submaximal minors, and the identity relating them to the
//! extended codimension for quasi-homogeneous germs.

mod koszul;
mod local;

pub use koszul::{koszul_betti, KoszulLevel, KoszulReport, TruncatedComplex};
pub use local::{homogeneity_weights, local_algebra_dim, milnor_number, LocalAlgebraReport};

use serde::Serialize;
use thiserror::Error;

use crate::polyring::{Polynomial, SymMatrix};
use crate::quasihom::{qh_find_diagonal, WeightSystem};
use crate::scalar::Scalar;
use crate::tangent::{ge_codimension, CodimReport};
use crate::Sym;

pub fn det_germ<S: Scalar>(a: &SymMatrix<S>) -> Polynomial<S> {
    a.det()
}

/// The `(n−1)×(n−1)` minors `M_ij` for `i ≤ j`, row-major. For `n = 1` the
/// single empty minor is `1`.
pub fn submaximal_minors<S: Scalar>(a: &SymMatrix<S>) -> Vec<Polynomial<S>> {
    let n = a.n();
    let full = a.to_full();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let rows: Vec<usize> = (0..n).filter(|&x| x != i).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            out.push(full.minor_det(&rows, &cols));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetInvError {
    #[error("no diagonal weights make the family quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("{0} did not stabilize within the degree bound")]
    NotStabilized(&'static str),
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem27Report {
    pub weights: WeightSystem,
    pub det: String,
    pub mu: LocalAlgebraReport,
    pub codim: CodimReport,
    pub koszul: KoszulReport,
    /// `μ(det∘A) = codim − β₁ + β₀`.
    pub holds: bool,
}

/// Checks `μ(det∘A) = 𝒢ₑ-codim(A) − β₁ + β₀` with every term computed
/// separately. Dimensions over `Q` agree with those over `C`, so the
/// check covers both sign variants of a complex class at once.
pub fn theorem27_check(a: &Sym, dmax: u32) -> Result<Theorem27Report, DetInvError> {
    let weights = qh_find_diagonal(a).ok_or(DetInvError::NotQuasiHomogeneous)?;
    let det = det_germ(a);
    let mu = milnor_number(&det, dmax);
    let mu_value = mu.exact().ok_or(DetInvError::NotStabilized("Milnor number"))?;
    let codim = ge_codimension(a, dmax);
    let c = codim.exact().ok_or(DetInvError::NotStabilized("codimension"))?;
    let koszul = koszul_betti(&submaximal_minors(a), a.nvars(), dmax);
    if !koszul.stabilized {
        return Err(DetInvError::NotStabilized("Koszul homology"));
    }
    let holds = mu_value as i64 == c as i64 - koszul.beta1 as i64 + koszul.beta0 as i64;
    Ok(Theorem27Report { weights, det: det.to_string(), mu, codim, koszul, holds })
}
