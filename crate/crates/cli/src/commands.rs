use std::collections::BTreeMap;

use germlab_core::catalog;
use germlab_core::detinv::{det_germ, koszul_betti, milnor_number, submaximal_minors, theorem27_check};
use germlab_core::polyring::{Monomial, PolyMatrix};
use germlab_core::quasihom::{lda_jets, qh_check, qh_find_diagonal, sqh_obstruction, SqhVerdict};
use germlab_core::realsig::{signature_field, GridSpec, SignatureField};
use germlab_core::tangent::{classify_germ, complete_transversal, ge_codimension, orbit_tangent_dim_jet, ClassifyStatus};
use germlab_core::unimodular::{
    congruence_search, moduli_quotient_dim, orientation_reversing_search, unimodular_splitting, CongruenceWitness, SearchBudget,
    SearchOutcome,
};
use germlab_core::{Sym, Q};
use serde_json::{json, Value};

use crate::document::{FieldKind, GermDocument, InputError};
use crate::suites::exact_degree;

/// Normal forms considered by `classify`.
const MAX_CODIM: usize = 10;

pub struct Outcome {
    pub report: Value,
    pub summary: String,
    /// `false` maps to exit code 1.
    pub resolved: bool,
    /// Extra files written next to the report: `(extension, contents)`.
    pub attachments: Vec<(&'static str, String)>,
}

impl Outcome {
    pub fn new(report: Value, summary: String, resolved: bool) -> Self {
        Outcome { report, summary, resolved, attachments: Vec::new() }
    }
}

fn upper(a: &Sym) -> Vec<String> {
    a.upper().iter().map(ToString::to_string).collect()
}

fn matrix_rows(m: &PolyMatrix<Q>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect()).collect()
}

fn witness_json(w: &CongruenceWitness<Q>) -> Value {
    json!({
        "phi": w.phi.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "x": matrix_rows(&w.x),
        "orientation_sign": w.orientation_sign(),
    })
}

pub fn classify(doc: &GermDocument, field: FieldKind, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let mut report = classify_germ(&a, MAX_CODIM, dmax);
    if field == FieldKind::Complex && report.status == ClassifyStatus::Matched {
        // signs are only distinguished over the reals
        let (t, id) = (report.table.clone().unwrap_or_default(), report.class_id.clone().unwrap_or_default());
        report.signs = catalog::entry(&t, &id)
            .map(|insts| insts.into_iter().filter(|i| i.params == report.params).map(|i| i.signs).collect())
            .unwrap_or_default();
    }
    let matched = report.status == ClassifyStatus::Matched;
    let label = match (&report.table, &report.class_id) {
        (Some(t), Some(id)) => format!("{t}#{id}"),
        _ => String::new(),
    };
    let expected = doc.expected_class.as_ref().map(|e| matched && (e == &label || Some(e) == report.class_id.as_ref()));
    let summary = match report.status {
        ClassifyStatus::Matched => format!("{label} {:?}", report.params),
        _ => format!("{:?}: {}", report.status, report.reason.clone().unwrap_or_default()),
    };
    let value = json!({"classification": report, "expected_class_matches": expected});
    Ok(Outcome::new(value, summary, matched && expected != Some(false)))
}

pub fn codim(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let report = ge_codimension(&a, dmax);
    let summary = match report.exact() {
        Some(c) => format!("Ge-codimension {c} (stabilized at degree {})", report.degree_used),
        None => format!("Ge-codimension not stabilized by degree {dmax} (last value {})", report.value),
    };
    let resolved = report.stabilized;
    Ok(Outcome::new(serde_json::to_value(report).expect("serializable"), summary, resolved))
}

fn jet_space_dim(a: &Sym, k: u32) -> usize {
    germlab_core::polyring::sym_dim(a.n()) * Monomial::up_to_degree(a.nvars(), 1, k).len()
}

pub fn tangent_dim(doc: &GermDocument, k: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let jet = a.truncate(k);
    let dim = orbit_tangent_dim_jet(&jet, k);
    let ambient = jet_space_dim(&a, k);
    let report = json!({"degree": k, "jet": upper(&jet), "orbit_tangent_dim": dim, "jet_space_dim": ambient});
    Ok(Outcome::new(report, format!("orbit tangent dimension {dim} of {ambient} at k = {k}"), true))
}

pub fn transversal(doc: &GermDocument, k: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let jet = a.truncate(k);
    let dirs: Vec<Vec<String>> = complete_transversal(&jet, k).iter().map(upper).collect();
    let summary = format!("{} transversal directions of degree {}", dirs.len(), k + 1);
    Ok(Outcome::new(json!({"degree": k, "jet": upper(&jet), "directions": dirs}), summary, true))
}

pub fn qh(doc: &GermDocument) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let found = qh_find_diagonal(&a);
    let check = found.as_ref().is_some_and(|w| qh_check(&a, w));
    let summary = match &found {
        Some(w) => format!("weights {w}, qh_check {check}"),
        None => "no diagonal weight system".into(),
    };
    Ok(Outcome::new(json!({"weights": found, "qh_check": check}), summary, check))
}

pub fn sqh_obstruct(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let cert = sqh_obstruction(&a, dmax);
    let (summary, resolved) = match &cert.verdict {
        SqhVerdict::Sqh(w) => (format!("SQH with weights {w}"), true),
        SqhVerdict::NotSqh => (format!("not SQH (trace-free linear parts at degree {})", cert.degree_used), true),
        SqhVerdict::Inconclusive(why) => (format!("inconclusive: {why}"), false),
    };
    Ok(Outcome::new(serde_json::to_value(&cert).expect("serializable"), summary, resolved))
}

pub fn lda(doc: &GermDocument, d: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let jets = lda_jets(&a, d);
    let basis: Vec<String> = jets.basis().iter().map(ToString::to_string).collect();
    let trace = jets.has_nonzero_trace();
    let summary = format!("LD_A jets of degree {d}: dimension {}, nonzero trace {trace}", jets.dim());
    let report = json!({"degree": d, "dim": jets.dim(), "has_nonzero_trace": trace, "basis": basis});
    Ok(Outcome::new(report, summary, true))
}

pub fn divmod(doc: &GermDocument, d: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let report = moduli_quotient_dim(&a, d);
    let summary = format!("divergence quotient dimension {} at degree {d}: {:?}", report.quotient_dim, report.quotient_monomials);
    let resolved = report.stabilized;
    Ok(Outcome::new(serde_json::to_value(report).expect("serializable"), summary, resolved))
}

pub fn witness(doc: &GermDocument, degree: Option<u32>) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let b = doc.target()?.unwrap_or_else(|| a.clone());
    match doc.witness()? {
        Some(w) => {
            let d = degree.unwrap_or_else(|| exact_degree(&w, &a, &b));
            let v = w.verify(&a, &b, d).map_err(|e| InputError::Shape(e.to_string()))?;
            let summary = format!("witness holds {} to degree {d}, orientation sign {}", v.holds, v.orientation_sign);
            Ok(Outcome::new(json!({"degree": d, "verification": v}), summary, v.holds))
        }
        None => {
            let d = degree.unwrap_or(3);
            let outcome = congruence_search(&a, &b, d, &SearchBudget { field_degree: 2, ..SearchBudget::default() });
            Ok(search_outcome(outcome, d, "congruence"))
        }
    }
}

fn search_outcome(outcome: SearchOutcome, d: u32, what: &str) -> Outcome {
    match outcome {
        SearchOutcome::Found(w) => {
            Outcome::new(json!({"degree": d, "found": true, "witness": witness_json(&w)}), format!("{what} witness found on {d}-jets"), true)
        }
        SearchOutcome::NotFoundWithinBudget { restarts } => Outcome::new(
            json!({"degree": d, "found": false, "restarts": restarts}),
            format!("no {what} witness within {restarts} restarts"),
            false,
        ),
    }
}

pub fn orient_search(doc: &GermDocument, d: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    Ok(search_outcome(orientation_reversing_search(&a, d, &SearchBudget::default()), d, "orientation-reversing"))
}

pub fn split(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let report = classify_germ(&a, MAX_CODIM, dmax);
    let (Some(t), Some(id)) = (report.table.clone(), report.class_id.clone()) else {
        let why = report.reason.clone().unwrap_or_else(|| format!("{:?}", report.status));
        return Ok(Outcome::new(json!({"classification": report}), format!("not classified: {why}"), false));
    };
    match unimodular_splitting(&t, &id) {
        Ok(rec) => {
            let summary = format!(
                "{t}#{id} {} into {}#{}",
                if rec.splits { "splits" } else { "does not split" },
                rec.unimodular_table,
                rec.unimodular_rows.join(",")
            );
            Ok(Outcome::new(json!({"class": format!("{t}#{id}"), "splitting": rec}), summary, true))
        }
        Err(e) => Ok(Outcome::new(json!({"class": format!("{t}#{id}"), "error": e.to_string()}), e.to_string(), false)),
    }
}

pub fn det(doc: &GermDocument) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let d = det_germ(&a);
    let minors: Vec<String> = submaximal_minors(&a).iter().map(ToString::to_string).collect();
    Ok(Outcome::new(json!({"det": d.to_string(), "submaximal_minors": minors}), format!("det = {d}"), true))
}

pub fn milnor(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let d = det_germ(&a);
    let report = milnor_number(&d, dmax);
    let summary = match report.exact() {
        Some(mu) => format!("mu(det) = {mu}"),
        None => format!("local algebra not finite by degree {dmax}"),
    };
    let resolved = report.stabilized;
    Ok(Outcome::new(json!({"det": d.to_string(), "milnor": report}), summary, resolved))
}

pub fn koszul(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    let gens = submaximal_minors(&a);
    let report = koszul_betti(&gens, a.nvars(), dmax);
    let summary = format!("beta0 = {}, beta1 = {}, stabilized {}", report.beta0, report.beta1, report.stabilized);
    let resolved = report.stabilized;
    Ok(Outcome::new(serde_json::to_value(report).expect("serializable"), summary, resolved))
}

pub fn thm27(doc: &GermDocument, dmax: u32) -> Result<Outcome, InputError> {
    let a = doc.germ()?;
    match theorem27_check(&a, dmax) {
        Ok(r) => {
            let summary = format!(
                "mu = {:?}, codim = {:?}, beta0 = {}, beta1 = {}: identity {}",
                r.mu.exact(),
                r.codim.exact(),
                r.koszul.beta0,
                r.koszul.beta1,
                if r.holds { "holds" } else { "fails" }
            );
            Ok(Outcome::new(serde_json::to_value(r).expect("serializable"), summary, true))
        }
        Err(e) => Ok(Outcome::new(json!({"error": e.to_string()}), e.to_string(), false)),
    }
}

fn signature_report(field: &SignatureField) -> Value {
    let census = field.census();
    let strata: BTreeMap<String, Value> = census
        .iter()
        .map(|(s, cells)| (s.to_string(), json!({"cells": cells, "components": field.components(*s)})))
        .collect();
    json!({
        "radius": field.spec.radius.to_string(),
        "step": field.spec.step.to_string(),
        "puncture": field.spec.puncture.to_string(),
        "cells": field.cells.len(),
        "strata": strata,
    })
}

pub fn signature(doc: &GermDocument, field_kind: FieldKind, step: &Q, radius: &Q) -> Result<Outcome, InputError> {
    if field_kind == FieldKind::Complex {
        return Err(InputError::Flag("signature strata need --field real".into()));
    }
    let a = doc.germ()?;
    let spec = GridSpec::new(radius.clone(), step.clone());
    let field = signature_field(&a, &spec).map_err(|e| InputError::Flag(e.to_string()))?;
    let report = signature_report(&field);
    let summary = field
        .census()
        .keys()
        .map(|s| format!("{s}: {} component(s)", field.components(*s)))
        .collect::<Vec<_>>()
        .join("; ");
    let mut out = Outcome::new(report, summary, true);
    out.attachments = vec![("csv", field.to_csv()), ("svg", field.to_svg())];
    Ok(out)
}

pub fn parse_rational(text: &str, flag: &str) -> Result<Q, InputError> {
    text.trim().parse::<Q>().map_err(|_| InputError::Flag(format!("{flag}: expected a rational such as 1/100, got '{text}'")))
}

/// A document for the germ `a`, used by tests.
#[cfg(test)]
pub fn document_for(a: &Sym) -> GermDocument {
    let n = a.n();
    let entries = (0..n).map(|i| (i..n).map(|j| Some(a.get(i, j).to_string())).collect()).collect();
    GermDocument {
        n,
        r: a.nvars(),
        field: FieldKind::Real,
        entries,
        name: None,
        expected_class: None,
        target: None,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use germlab_core::polyring::SymMatrix;

    fn sym(rows: &[&[&str]]) -> Sym {
        SymMatrix::parse(rows.len(), 2, rows).unwrap()
    }

    #[test]
    fn diagonal_germ_is_quasi_homogeneous() {
        let out = qh(&document_for(&sym(&[&["x1", "0"], &["x2"]]))).unwrap();
        assert!(out.resolved);
        assert_eq!(out.report["qh_check"], json!(true));
    }

    #[test]
    fn class_six_codimension() {
        let out = codim(&document_for(&sym(&[&["x1", "x2^2"], &["x1^2"]])), 8).unwrap();
        assert_eq!((out.report["value"].as_u64(), out.report["stabilized"].as_bool()), (Some(6), Some(true)));
    }

    #[test]
    fn complex_field_has_no_signature() {
        let doc = document_for(&sym(&[&["x1", "0"], &["x2"]]));
        assert!(signature(&doc, FieldKind::Complex, &Q::from_integer(1.into()), &Q::from_integer(1.into())).is_err());
    }

    #[test]
    fn rationals_from_flags() {
        assert_eq!(parse_rational("1/100", "--grid-step").unwrap(), Q::new(1.into(), 100.into()));
        assert!(parse_rational("0.01", "--grid-step").is_err());
    }
}
