use serde::Serialize;

use crate::linalg::{JetCoords, JetSubspace};
use crate::polyring::{Monomial, Polynomial, SymMatrix, VectorFieldJet};
use crate::quasihom::lda_jets;
use crate::scalar::Scalar;

/// Jets of `T𝒟_A(Ω) = {div V : V ∈ L𝒟_A}` for the standard volume form,
/// as a subspace of function jets of degree `≤ degree`.
#[derive(Clone, Debug)]
pub struct DivergenceModule<S: Scalar> {
    pub degree: u32,
    pub coords: JetCoords,
    pub space: JetSubspace<S>,
    /// Truncation of `L𝒟_A` the fields were projected from.
    pub lda_degree: u32,
    /// Whether the projected fields agreed at two consecutive `L𝒟`
    /// truncations. When `false` the module may be too large.
    pub stabilized: bool,
}

impl<S: Scalar> DivergenceModule<S> {
    pub fn quotient_dim(&self) -> usize {
        self.space.quotient_dim()
    }

    pub fn contains(&self, f: &Polynomial<S>) -> bool {
        self.space.contains(&self.coords.encode_poly(&f.truncate(self.degree))).expect("own coordinates")
    }

    /// Monomials whose classes span the quotient.
    pub fn quotient_monomials(&self) -> Vec<Monomial> {
        self.space.non_pivots().into_iter().map(|i| self.coords.coordinate(i).1.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub degree: u32,
    pub quotient_dim: usize,
    pub quotient_monomials: Vec<String>,
    pub lda_degree: u32,
    pub stabilized: bool,
}

/// Fields of `L𝒟_A` known up to degree `d + 1` (enough for divergences up to
/// degree `d`), taken from successively deeper truncations until the
/// projection stops shrinking or `extra` additional degrees were used.
fn projected_fields<S: Scalar>(a: &SymMatrix<S>, d: u32, extra: u32) -> (Vec<VectorFieldJet<S>>, u32, bool) {
    let mut prev: Option<JetSubspace<S>> = None;
    let mut last = None;
    for e in d + 1..=d + 1 + extra {
        let jets = lda_jets(a, e);
        let cut = jets.field_coords.degree_start(d + 2);
        let proj = jets.space.truncate_coords(cut);
        let stable = prev.as_ref().is_some_and(|p| p.dim() == proj.dim());
        let fields: Vec<VectorFieldJet<S>> = proj.rref_basis().iter().map(|v| jets.decode_field(v)).collect();
        if stable {
            return (fields, e, true);
        }
        prev = Some(proj);
        last = Some((fields, e));
    }
    let (fields, e) = last.expect("at least one truncation");
    (fields, e, false)
}

/// `T𝒟_A(Ω)` modulo terms of degree above `d`.
pub fn divergence_module<S: Scalar>(a: &SymMatrix<S>, d: u32) -> DivergenceModule<S> {
    divergence_module_with(a, d, 3)
}

pub fn divergence_module_with<S: Scalar>(a: &SymMatrix<S>, d: u32, extra: u32) -> DivergenceModule<S> {
    let r = a.nvars();
    let coords = JetCoords::new(1, r, 0, d);
    let (fields, lda_degree, stabilized) = projected_fields(a, d, extra);
    let mut space = JetSubspace::new(coords.len());
    // div(m·V) = m·div V + V(m)
    for v in &fields {
        let div = v.divergence();
        for m in Monomial::up_to_degree(r, 0, d) {
            let mp = Polynomial::term(m.clone(), S::one());
            let f = &div.mul_monomial(&m) + &v.apply(&mp);
            space.insert(coords.encode_poly(&f.truncate(d))).expect("own coordinates");
        }
    }
    DivergenceModule { degree: d, coords, space, lda_degree, stabilized }
}

/// Dimension of the function jets of degree `≤ d` modulo `T𝒟_A(Ω)`.
pub fn moduli_quotient_dim<S: Scalar>(a: &SymMatrix<S>, d: u32) -> ModuliReport {
    let m = divergence_module(a, d);
    ModuliReport {
        degree: d,
        quotient_dim: m.quotient_dim(),
        quotient_monomials: m.quotient_monomials().iter().map(ToString::to_string).collect(),
        lda_degree: m.lda_degree,
        stabilized: m.stabilized,
    }
}
