use serde::Serialize;
use thiserror::Error;

use super::symbolic::{orientation_argument, OrientationProof};
use crate::catalog::{self, CatalogError};
use crate::polyring::Polynomial;
use crate::{Poly, Sym};

/// How a class of the congruence classification behaves under
/// volume-preserving equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingRecord {
    pub table: String,
    pub class_id: String,
    pub splits: bool,
    /// Table holding the volume-preserving normal forms.
    pub unimodular_table: String,
    /// Row(s) of that table covering the class.
    pub unimodular_rows: Vec<String>,
    /// For a split class, `A` and `A∘(x1, −x2)`; otherwise `A` alone.
    pub representatives: Vec<Vec<String>>,
    /// For a split class, the case analysis showing that every
    /// self-equivalence preserves orientation.
    pub orientation: Option<OrientationProof>,
}

#[derive(Debug, Error)]
pub enum SplittingError {
    #[error("unknown class '{id}' for table '{table}'")]
    UnknownClass { table: String, id: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Jet degree at which the orientation argument closes.
fn argument_degree(table: &str, id: &str) -> u32 {
    match (table, id) {
        ("table2", "10") | ("n2m3", "9") => 3,
        _ => 2,
    }
}

fn splitting_rows(table: &str, id: &str) -> Option<(&'static str, bool, Vec<&'static str>)> {
    let out = match (table, id) {
        ("table2", "1") => ("table3", false, vec!["1"]),
        ("table2", "2") => ("table3", false, vec!["2"]),
        ("table2", "3") => ("table3", false, vec!["3"]),
        ("table2", "4") => ("table3", false, vec!["4"]),
        ("table2", "5") => ("table3", false, vec!["5"]),
        ("table2", "6") => ("table3", false, vec!["6"]),
        ("table2", "7") => ("table3", false, vec!["7"]),
        ("table2", "8") => ("table3", true, vec!["8±"]),
        ("table2", "9") => ("table3", true, vec!["9+", "9-"]),
        ("table2", "10") => ("table3", true, vec!["10±"]),
        ("n2m3", "1") => ("uni_n2m3", false, vec!["1"]),
        ("n2m3", "2") => ("uni_n2m3", false, vec!["2"]),
        ("n2m3", "3") => ("uni_n2m3", false, vec!["3"]),
        ("n2m3", "4") => ("uni_n2m3", false, vec!["4"]),
        ("n2m3", "5") => ("uni_n2m3", true, vec!["5±"]),
        ("n2m3", "6") => ("uni_n2m3", false, vec!["6"]),
        ("n2m3", "7") => ("uni_n2m3", true, vec!["7±"]),
        ("n2m3", "8") => ("uni_n2m3", true, vec!["8±"]),
        ("n2m3", "9") => ("uni_n2m3", true, vec!["9±"]),
        ("n2m3", "10") => ("uni_n2m3", true, vec!["10±"]),
        _ => return None,
    };
    Some(out)
}

fn upper_strings(a: &Sym) -> Vec<String> {
    a.upper().iter().map(ToString::to_string).collect()
}

/// Table-driven splitting of a class of `table2` or `n2m3`.
pub fn unimodular_splitting(table: &str, id: &str) -> Result<SplittingRecord, SplittingError> {
    let (uni, splits, rows) =
        splitting_rows(table, id).ok_or_else(|| SplittingError::UnknownClass { table: table.into(), id: id.into() })?;
    let first = catalog::entry(table, id)?.into_iter().next().expect("rows have instances");
    let a = first.matrix;
    let mut representatives = vec![upper_strings(&a)];
    let mut orientation = None;
    if splits {
        orientation = Some(orientation_argument(&a, argument_degree(table, id)));
        let r = a.nvars();
        let mut phi: Vec<Poly> = (0..r).map(|i| Polynomial::var(r, i)).collect();
        phi[1] = -&phi[1];
        representatives.push(upper_strings(&a.compose(&phi)));
    }
    Ok(SplittingRecord {
        table: table.into(),
        class_id: id.into(),
        splits,
        unimodular_table: uni.into(),
        unimodular_rows: rows.into_iter().map(String::from).collect(),
        representatives,
        orientation,
    })
}
