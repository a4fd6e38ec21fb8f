use std::collections::BTreeMap;

use serde::Serialize;

use super::{determinacy_sufficient, ge_codimension, orbit_tangent_dim_jet, CodimReport};
use crate::catalog::{self, Instance};
use crate::detinv::{local_algebra_dim, milnor_number, submaximal_minors};
use crate::pencil::{classify_one_jet, linear_coefficients, one_jet_invariants_n3};
use crate::realsig::{signature_field, GridSpec, Signature};
use crate::scalar::{q, qr};
use crate::unimodular::{congruence_search, SearchBudget};
use crate::linalg::{JetCoords, JetSubspace};
use crate::polyring::Monomial;
use crate::{Poly, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassifyStatus {
    /// A single normal form (up to its listed sign choices where the real
    /// invariants cannot tell them apart) has the same invariants.
    Matched,
    /// Several normal forms share the invariants.
    Ambiguous,
    /// No normal form matches, or an invariant did not stabilize.
    Unresolved,
}

/// Invariants of `𝒢`-equivalence used for matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermInvariants {
    pub codim: Option<usize>,
    /// Class of the linear part: pencil class for `n = 2`, image and
    /// generic rank for `n = 3`.
    pub one_jet: String,
    /// Milnor number of `det∘A`.
    pub mu: Option<usize>,
    /// Colength of the ideal of submaximal minors.
    pub minors_colength: Option<usize>,
    /// Dimensions of the jet-group orbits of `j¹A, j²A, j³A`.
    pub jet_orbit_dims: Vec<usize>,
    /// `dim O^n/(A·O^n + m^k O^n)` for `k = 1..=5`.
    pub cokernel_lengths: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub status: ClassifyStatus,
    pub table: Option<String>,
    pub class_id: Option<String>,
    pub params: BTreeMap<String, i64>,
    /// Sign choices consistent with the real invariants.
    pub signs: Vec<Vec<(String, i8)>>,
    pub candidates: Vec<String>,
    pub invariants: GermInvariants,
    pub codim_report: CodimReport,
    /// Component counts of each signature stratum on a punctured grid,
    /// when needed to separate candidates.
    pub signature_components: Option<BTreeMap<String, usize>>,
    /// Candidates reached by an exactly verified congruence on a jet that
    /// determines them, when invariants leave a tie.
    pub witnessed: Vec<String>,
    /// Smallest `k` passing the sufficient determinacy test on degrees
    /// `k+1..=k+2`.
    pub determinacy: Option<u32>,
    /// `j¹A, j²A, …` up to the determinacy degree (or the budget).
    pub jet_chain: Vec<Vec<String>>,
    pub reason: Option<String>,
}

fn one_jet(a: &Sym) -> String {
    let (c, d) = linear_coefficients(a);
    match a.n() {
        2 => match classify_one_jet(&c, &d) {
            Ok(j) => format!("pencil {}{} rank {} det {:?}", j.class_id, j.sign.map_or(String::new(), |s| if s > 0 { "+".into() } else { "-".into() }), j.rank, j.det_class),
            Err(e) => format!("error: {e}"),
        },
        3 => match one_jet_invariants_n3(&c, &d) {
            Ok(j) => format!("image rank {} generic rank {}", j.image_rank, j.generic_rank),
            Err(e) => format!("error: {e}"),
        },
        n => format!("n = {n}"),
    }
}

fn invariants(a: &Sym, codim: Option<usize>, dmax: u32) -> GermInvariants {
    GermInvariants {
        codim,
        one_jet: one_jet(a),
        mu: milnor_number(&a.det(), dmax).exact(),
        minors_colength: local_algebra_dim(&submaximal_minors(a), a.nvars(), dmax).exact(),
        jet_orbit_dims: (1..=3).map(|k| orbit_tangent_dim_jet(a, k)).collect(),
        cokernel_lengths: (1..=5).map(|k| cokernel_length(a, k)).collect(),
    }
}

/// Length of the cokernel of `A` modulo `m^k`; unchanged by coordinate
/// changes and by `A ↦ XᵀAX`.
pub fn cokernel_length(a: &Sym, k: u32) -> usize {
    let (n, r) = (a.n(), a.nvars());
    let coords = JetCoords::new(n, r, 0, k - 1);
    let mut image = JetSubspace::new(coords.len());
    for j in 0..n {
        for m in Monomial::up_to_degree(r, 0, k - 1) {
            let col: Vec<Poly> = (0..n).map(|i| a.get(i, j).mul_monomial(&m).truncate(k - 1)).collect();
            image.insert(coords.encode(&col)).expect("matching ambient");
        }
    }
    image.quotient_dim()
}

fn signature_components(a: &Sym) -> Option<BTreeMap<String, usize>> {
    let field = signature_field(a, &GridSpec::new(q(1), qr(1, 24))).ok()?;
    let census = field.census();
    Some(census.keys().map(|s: &Signature| (s.to_string(), field.components(*s))).collect())
}

/// Searches for a congruence from `a` to the normal form `b` on a jet that
/// determines `b`.
fn has_witness(a: &Sym, b: &Sym, dmax: u32) -> bool {
    let Some(k) = (1..=dmax).find(|&k| determinacy_sufficient(b, k, k + 2)) else { return false };
    (1..=2).any(|field_degree| {
        let budget = SearchBudget { field_degree, ..SearchBudget::default() };
        congruence_search(a, b, k, &budget).found().is_some()
    })
}

fn row_key(inst: &Instance) -> (String, String, BTreeMap<String, i64>) {
    (inst.table.clone(), inst.id.clone(), inst.params.clone())
}

/// Matches a germ of a two-parameter family against the normal forms of
/// its size, using invariants of `𝒢`-equivalence. Real sign variants are
/// separated by the component counts of the signature strata.
pub fn classify_germ(a: &Sym, max_codim: usize, dmax: u32) -> ClassifyReport {
    let codim_report = ge_codimension(a, dmax);
    let inv = invariants(a, codim_report.exact(), dmax);
    let mut report = ClassifyReport {
        status: ClassifyStatus::Unresolved,
        table: None,
        class_id: None,
        params: BTreeMap::new(),
        signs: Vec::new(),
        candidates: Vec::new(),
        invariants: inv.clone(),
        codim_report: codim_report.clone(),
        signature_components: None,
        witnessed: Vec::new(),
        determinacy: None,
        jet_chain: Vec::new(),
        reason: None,
    };
    let last = (1..=dmax).find(|&k| determinacy_sufficient(a, k, k + 2));
    report.determinacy = last;
    report.jet_chain = (1..=last.unwrap_or(dmax)).map(|k| a.truncate(k).upper().iter().map(ToString::to_string).collect()).collect();
    let table = match (a.n(), a.nvars()) {
        (2, 2) => "table2",
        (3, 2) => "n2m3",
        (n, r) => {
            report.reason = Some(format!("no normal forms for n = {n}, r = {r}"));
            return report;
        }
    };
    let Some(codim) = inv.codim else {
        report.reason = Some(format!("codimension did not stabilize by degree {dmax}"));
        return report;
    };
    if codim > max_codim {
        report.reason = Some(format!("codimension {codim} exceeds {max_codim}"));
        return report;
    }
    let mut matches: Vec<Instance> = catalog::table(table)
        .expect("built-in table")
        .into_iter()
        .filter(|inst| inst.codim.map_or(true, |c| c == codim))
        .filter(|inst| invariants(&inst.matrix, Some(codim), dmax) == inv)
        .collect();
    let mut rows: Vec<_> = matches.iter().map(row_key).collect();
    rows.dedup();
    if matches.len() > 1 {
        let own = signature_components(a);
        report.signature_components = own.clone();
        let refined: Vec<Instance> = matches.iter().filter(|inst| signature_components(&inst.matrix) == own).cloned().collect();
        if !refined.is_empty() {
            matches = refined;
        }
        rows = matches.iter().map(row_key).collect();
        rows.dedup();
    }
    if rows.len() > 1 {
        let witnessed: Vec<Instance> = matches.iter().filter(|inst| has_witness(a, &inst.matrix, dmax)).cloned().collect();
        report.witnessed = witnessed.iter().map(Instance::label).collect();
        if !witnessed.is_empty() {
            matches = witnessed;
            rows = matches.iter().map(row_key).collect();
            rows.dedup();
        }
    }
    report.candidates = matches.iter().map(Instance::label).collect();
    match rows.len() {
        0 => report.reason = Some("no normal form has these invariants".into()),
        1 => {
            let (t, id, params) = rows.remove(0);
            report.status = ClassifyStatus::Matched;
            report.table = Some(t);
            report.class_id = Some(id);
            report.params = params;
            report.signs = matches.iter().map(|i| i.signs.clone()).collect();
        }
        _ => {
            report.status = ClassifyStatus::Ambiguous;
            report.reason = Some(format!("{} normal forms share the invariants", rows.len()));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::SymMatrix;

    fn sym(rows: &[&[&str]]) -> Sym {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    #[test]
    fn swapped_variables_land_in_the_cusp_family() {
        let r = classify_germ(&sym(&[&["x2", "x1"], &["x2^3"]]), 8, 10);
        assert_eq!(r.status, ClassifyStatus::Matched);
        assert_eq!((r.class_id.as_deref(), r.params.get("l")), (Some("3"), Some(&3)));
        assert_eq!(r.signs, vec![vec![("s".to_string(), 1)]]);
    }

    #[test]
    fn class_eight_with_cubic_term() {
        let r = classify_germ(&sym(&[&["x1", "0"], &["x1*x2 + x2^3"]]), 8, 10);
        assert_eq!(r.status, ClassifyStatus::Matched);
        assert_eq!((r.class_id.as_deref(), r.params.get("l")), (Some("8"), Some(&3)));
    }

    #[test]
    fn representative_is_a_fixed_point() {
        let r = classify_germ(&sym(&[&["x1", "x2^2"], &["x1*x2"]]), 8, 10);
        assert_eq!(r.status, ClassifyStatus::Matched);
        assert_eq!((r.class_id.as_deref(), r.params.get("l")), (Some("9"), Some(&2)));
        assert!(r.determinacy.is_some());
    }

    #[test]
    fn high_codimension_is_unresolved() {
        let r = classify_germ(&sym(&[&["x1", "0"], &["x2^2"]]), 8, 6);
        assert_eq!(r.status, ClassifyStatus::Unresolved);
    }
}
