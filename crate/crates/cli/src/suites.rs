//! Regression runs over the built-in tables.

use germlab_core::catalog::{self, Instance};
use germlab_core::pencil::{classify_one_jet, linear_coefficients};
use germlab_core::quasihom::{qh_check, qh_find_diagonal, quasi_degrees, WeightSystem};
use germlab_core::tangent::{ge_codimension, mather_stratum_check, table4_family, table4_strata};
use germlab_core::unimodular::CongruenceWitness;
use germlab_core::{Sym, Q};
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITES: [&str; 11] =
    ["table1", "table2", "n2m3", "table3", "uni_n2m3", "table4", "table5", "table7", "bruce22", "bruce23", "bruce43"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteItem {
    pub label: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub items: Vec<SuiteItem>,
}

fn item(label: impl Into<String>, passed: bool, detail: Value) -> SuiteItem {
    SuiteItem { label: label.into(), passed, detail }
}

fn one_jets(insts: Vec<Instance>) -> Vec<SuiteItem> {
    insts
        .into_iter()
        .map(|inst| {
            let (c, d) = linear_coefficients(&inst.matrix);
            match classify_one_jet(&c, &d) {
                Ok(got) => {
                    let ok = got.class_id.to_string() == inst.id && inst.rank.map_or(true, |r| r == got.rank);
                    item(inst.label(), ok, json!({"class": got.class_id, "rank": got.rank, "expected_rank": inst.rank}))
                }
                Err(e) => item(inst.label(), false, json!({"error": e.to_string()})),
            }
        })
        .collect()
}

fn codims(insts: Vec<Instance>, dmax: u32) -> Vec<SuiteItem> {
    insts
        .into_iter()
        .map(|inst| {
            let report = ge_codimension(&inst.matrix, dmax);
            let weights = qh_find_diagonal(&inst.matrix);
            let ok = report.exact().is_some() && report.exact() == inst.codim && weights.is_some();
            item(
                inst.label(),
                ok,
                json!({"codim": report.exact(), "expected": inst.codim, "degree_used": report.degree_used, "weights": weights}),
            )
        })
        .collect()
}

fn weight_columns(insts: Vec<Instance>) -> Vec<SuiteItem> {
    insts
        .into_iter()
        .map(|inst| {
            let lambda = inst.lambda.clone().unwrap_or_default();
            let system = match &inst.delta {
                Some(delta) => Some(WeightSystem::new(lambda, delta.clone())),
                None => quasi_degrees(&inst.matrix, &lambda).map(|delta| WeightSystem::new(lambda, delta)),
            };
            let checked = system.as_ref().is_some_and(|w| qh_check(&inst.matrix, w));
            let found = qh_find_diagonal(&inst.matrix);
            let ok = checked && found.as_ref().is_some_and(|w| qh_check(&inst.matrix, w));
            item(inst.label(), ok, json!({"weights": system, "qh_check": checked, "found": found}))
        })
        .collect()
}

fn bruce(insts: Vec<Instance>) -> Vec<SuiteItem> {
    insts
        .into_iter()
        .map(|inst| {
            let w = WeightSystem::new(inst.lambda.clone().unwrap_or_default(), inst.delta.clone().unwrap_or_default());
            let ok = qh_check(&inst.matrix, &w);
            item(inst.label(), ok, json!({"weights": w, "qh_check": ok}))
        })
        .collect()
}

fn witnesses(insts: Vec<Instance>) -> Vec<SuiteItem> {
    insts
        .into_iter()
        .map(|inst| {
            let (Some(phi), Some(x)) = (inst.phi.clone(), inst.x.clone()) else {
                return item(inst.label(), false, json!({"error": "row has no witness"}));
            };
            let w = CongruenceWitness { phi, x };
            match w.verify(&inst.matrix, &inst.matrix, exact_degree(&w, &inst.matrix, &inst.matrix)) {
                Ok(v) => item(inst.label(), v.holds && v.orientation_sign == -1, serde_json::to_value(v).expect("serializable")),
                Err(e) => item(inst.label(), false, json!({"error": e.to_string()})),
            }
        })
        .collect()
}

/// A degree past every term of `Xᵀ(A∘Φ)X` and of `B`, so that a check
/// modulo higher terms is an identity of polynomials.
pub fn exact_degree(w: &CongruenceWitness<Q>, a: &Sym, b: &Sym) -> u32 {
    let phi = w.phi.iter().filter_map(|p| p.degree()).max().unwrap_or(1).max(1);
    let x = (0..w.x.rows()).flat_map(|i| (0..w.x.cols()).map(move |j| (i, j))).filter_map(|(i, j)| w.x.get(i, j).degree()).max().unwrap_or(0);
    let a_deg = a.degree().unwrap_or(0);
    (a_deg * phi + 2 * x).max(b.degree().unwrap_or(0))
}

fn strata() -> Vec<SuiteItem> {
    match mather_stratum_check(&table4_family(), &table4_strata()) {
        Ok(reports) => reports
            .into_iter()
            .map(|r| {
                let ok = r.passed();
                item(r.name.clone(), ok, serde_json::to_value(&r).expect("serializable"))
            })
            .collect(),
        Err(e) => vec![item("table4", false, json!({"error": e.to_string()}))],
    }
}

pub fn run_suite(name: &str, dmax: u32) -> Result<SuiteReport, catalog::CatalogError> {
    let items = match name {
        "table1" => one_jets(catalog::table(name)?),
        "table2" | "n2m3" => codims(catalog::table(name)?, dmax),
        "table3" | "uni_n2m3" => weight_columns(catalog::table(name)?),
        "table4" => strata(),
        "table5" | "table7" => witnesses(catalog::table(name)?),
        "bruce22" | "bruce23" | "bruce43" => bruce(catalog::table(name)?),
        other => return Err(catalog::CatalogError::UnknownTable(other.to_string())),
    };
    let passed = items.iter().filter(|i| i.passed).count();
    Ok(SuiteReport { suite: name.to_string(), passed, failed: items.len() - passed, items })
}
