//! Built-in corpus of normal forms, expanded over parameter and sign
//! instances.
//!
//! Entry templates use `{name}` for an integer parameter, `{s}` for a sign
//! prefix (`""` or `"-"`) and `{+s}` for a sign infix (`"+"` or `"-"`).
//! Integer columns (codimension, weights) are arithmetic expressions in the
//! parameters.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{parse_polynomial, ParseError, PolyMatrix, SymMatrix};
use crate::{Poly, Sym, Q};

const TABLES: &str = include_str!("../data/tables.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown table '{0}'")]
    UnknownTable(String),
    #[error("unknown entry '{id}' in table '{table}'")]
    UnknownEntry { table: String, id: String },
    #[error("{context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("{context}: expected an integer, got {value}")]
    NotInteger { context: String, value: String },
    #[error("{0}")]
    Matrix(#[from] crate::polyring::MatrixError),
}

#[derive(Clone, Debug, Deserialize)]
struct RawEntry {
    id: String,
    n: usize,
    #[serde(default = "two")]
    r: usize,
    entries: Vec<Vec<String>>,
    #[serde(default)]
    params: Vec<BTreeMap<String, i64>>,
    #[serde(default)]
    signs: Vec<String>,
    codim: Option<String>,
    corank: Option<usize>,
    bn: Option<String>,
    lambda: Option<Vec<String>>,
    delta: Option<Vec<String>>,
    j2det: Option<String>,
    rank: Option<usize>,
    phi: Option<Vec<String>>,
    x: Option<Vec<Vec<String>>>,
    printed: Option<Vec<Vec<String>>>,
}

fn two() -> usize {
    2
}

/// One parameter and sign instance of a table row.
#[derive(Clone, Debug)]
pub struct Instance {
    pub table: String,
    pub id: String,
    pub params: BTreeMap<String, i64>,
    /// `(name, ±1)` in the row's declared order.
    pub signs: Vec<(String, i8)>,
    pub matrix: Sym,
    pub codim: Option<usize>,
    pub corank: Option<usize>,
    pub bn: Option<usize>,
    pub lambda: Option<Vec<i64>>,
    pub delta: Option<Vec<i64>>,
    pub j2det: Option<Poly>,
    pub rank: Option<usize>,
    pub phi: Option<Vec<Poly>>,
    pub x: Option<PolyMatrix<Q>>,
    /// The row exactly as printed when it differs from the working form.
    pub printed: Option<Sym>,
}

impl Instance {
    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn param(&self, name: &str) -> Option<i64> {
        self.params.get(name).copied()
    }

    pub fn sign(&self, name: &str) -> Option<i8> {
        self.signs.iter().find(|(n, _)| n == name).map(|&(_, s)| s)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.table, self.id)?;
        let mut parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(self.signs.iter().map(|(k, s)| format!("{k}={}", if *s > 0 { '+' } else { '-' })));
        if !parts.is_empty() {
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableSummary {
    pub name: String,
    pub rows: usize,
    pub instances: usize,
}

fn raw_tables() -> BTreeMap<String, Vec<RawEntry>> {
    serde_json::from_str(TABLES).expect("built-in tables are valid JSON")
}

/// Names of the built-in tables in a fixed order.
pub fn table_names() -> Vec<String> {
    const ORDER: [&str; 11] =
        ["table1", "table2", "n2m3", "table3", "uni_n2m3", "table5", "table7", "bruce22", "bruce23", "bruce43", "examples"];
    let raw = raw_tables();
    let mut names: Vec<String> = ORDER.iter().filter(|n| raw.contains_key(**n)).map(|n| n.to_string()).collect();
    names.extend(raw.keys().filter(|k| !ORDER.contains(&k.as_str())).cloned());
    names
}

pub fn summaries() -> Result<Vec<TableSummary>, CatalogError> {
    let raw = raw_tables();
    table_names()
        .into_iter()
        .map(|name| {
            let rows = raw[&name].len();
            let instances = table(&name)?.len();
            Ok(TableSummary { name, rows, instances })
        })
        .collect()
}

/// Every instance of the named table.
pub fn table(name: &str) -> Result<Vec<Instance>, CatalogError> {
    let raw = raw_tables();
    let rows = raw.get(name).ok_or_else(|| CatalogError::UnknownTable(name.to_string()))?;
    let mut out = Vec::new();
    for row in rows {
        out.extend(expand(name, row)?);
    }
    Ok(out)
}

/// Instances of one row.
pub fn entry(table_name: &str, id: &str) -> Result<Vec<Instance>, CatalogError> {
    let raw = raw_tables();
    let rows = raw.get(table_name).ok_or_else(|| CatalogError::UnknownTable(table_name.to_string()))?;
    let row = rows
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| CatalogError::UnknownEntry { table: table_name.to_string(), id: id.to_string() })?;
    expand(table_name, row)
}

/// The first instance matching the given parameters and signs.
pub fn instance(table_name: &str, id: &str, params: &[(&str, i64)], signs: &[(&str, i8)]) -> Result<Instance, CatalogError> {
    entry(table_name, id)?
        .into_iter()
        .find(|inst| {
            params.iter().all(|(k, v)| inst.param(k) == Some(*v)) && signs.iter().all(|(k, s)| inst.sign(k) == Some(*s))
        })
        .ok_or_else(|| CatalogError::UnknownEntry { table: table_name.to_string(), id: id.to_string() })
}

/// Parses an entry template with the given parameter and sign values.
pub fn instantiate(template: &str, params: &BTreeMap<String, i64>, signs: &[(String, i8)]) -> String {
    let mut s = template.to_string();
    for (name, sign) in signs {
        s = s.replace(&format!("{{+{name}}}"), if *sign > 0 { "+" } else { "-" });
        s = s.replace(&format!("{{{name}}}"), if *sign > 0 { "" } else { "-" });
    }
    for (name, v) in params {
        let text = if *v < 0 { format!("({v})") } else { v.to_string() };
        s = s.replace(&format!("{{{name}}}"), &text);
    }
    s
}

fn sign_choices(names: &[String]) -> Vec<Vec<(String, i8)>> {
    let mut out = vec![Vec::new()];
    for name in names {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                [1i8, -1].into_iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push((name.clone(), s));
                    p
                })
            })
            .collect();
    }
    out
}

fn expand(table_name: &str, row: &RawEntry) -> Result<Vec<Instance>, CatalogError> {
    let params = if row.params.is_empty() { vec![BTreeMap::new()] } else { row.params.clone() };
    let mut out = Vec::new();
    for p in &params {
        for signs in sign_choices(&row.signs) {
            let context = format!("{table_name}#{}", row.id);
            let poly = |t: &str, nvars: usize| -> Result<Poly, CatalogError> {
                parse_polynomial(&instantiate(t, p, &signs), nvars)
                    .map_err(|source| CatalogError::Parse { context: context.clone(), source })
            };
            let int = |t: &str| -> Result<i64, CatalogError> {
                let v = poly(t, 1)?;
                let c = v.constant_term();
                if v.degree().unwrap_or(0) > 0 || !c.is_integer() {
                    return Err(CatalogError::NotInteger { context: context.clone(), value: v.to_string() });
                }
                Ok(c.to_integer().to_i64().expect("small integer"))
            };
            let matrix_of = |rows: &[Vec<String>]| -> Result<Sym, CatalogError> {
                let upper = rows.iter().flatten().map(|t| poly(t, row.r)).collect::<Result<Vec<_>, _>>()?;
                Ok(SymMatrix::from_upper(row.n, row.r, upper)?)
            };
            let usize_of = |t: &str| int(t).map(|v| v as usize);
            let ints = |ts: &[String]| ts.iter().map(|t| int(t)).collect::<Result<Vec<_>, _>>();
            let x = match &row.x {
                Some(rows) => {
                    let polys = rows
                        .iter()
                        .map(|r| r.iter().map(|t| poly(t, row.r)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    Some(PolyMatrix::from_rows(row.r, polys))
                }
                None => None,
            };
            out.push(Instance {
                table: table_name.to_string(),
                id: row.id.clone(),
                params: p.clone(),
                signs: signs.clone(),
                matrix: matrix_of(&row.entries)?,
                codim: row.codim.as_deref().map(usize_of).transpose()?,
                corank: row.corank,
                bn: row.bn.as_deref().map(usize_of).transpose()?,
                lambda: row.lambda.as_deref().map(ints).transpose()?,
                delta: row.delta.as_deref().map(ints).transpose()?,
                j2det: row.j2det.as_deref().map(|t| poly(t, row.r)).transpose()?,
                rank: row.rank,
                phi: row.phi.as_ref().map(|ts| ts.iter().map(|t| poly(t, row.r)).collect()).transpose()?,
                x,
                printed: row.printed.as_deref().map(matrix_of).transpose()?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn every_table_expands() {
        for s in summaries().unwrap() {
            assert!(s.instances >= s.rows, "{s:?}");
        }
    }

    #[test]
    fn templates_fill_signs_and_parameters() {
        let inst = instance("table2", "7", &[("l", 3)], &[("s1", -1), ("s2", 1)]).unwrap();
        assert_eq!(inst.matrix.get(1, 1).to_string(), parse_polynomial::<Q>("-x2^2 + x1^3", 2).unwrap().to_string());
        assert_eq!(inst.codim, Some(5));
        assert_eq!(inst.label(), "table2#7[l=3,s1=-,s2=+]");
    }

    #[test]
    fn negated_sums_and_sign_powers() {
        let inst = instance("n2m3", "2", &[], &[("s", -1)]).unwrap();
        assert_eq!(inst.matrix.get(2, 2), &parse_polynomial::<Q>("-x1 - x2", 2).unwrap());
        let t5 = instance("table5", "4", &[("l", 3)], &[]).unwrap();
        assert_eq!(t5.x.unwrap().get(0, 0).constant_term(), q(-1));
    }

    #[test]
    fn weight_expressions_evaluate() {
        let inst = instance("bruce43", "1", &[("k", 2)], &[]).unwrap();
        assert_eq!(inst.lambda, Some(vec![2, 4, 3, 4]));
        assert_eq!(inst.delta, Some(vec![2, 4, 4]));
    }
}
