use std::fs;
use std::path::Path;

use germlab_core::polyring::{parse_polynomial, MatrixError, ParseError, PolyMatrix, SymMatrix, SymMatrixGerm};
use germlab_core::unimodular::CongruenceWitness;
use germlab_core::{Poly, Sym, Q};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry ({i},{j}): {source}")]
    Entry { i: usize, j: usize, source: ParseError },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{0}")]
    Flag(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    #[default]
    Real,
    Complex,
}

#[derive(Clone, Debug, Deserialize)]
pub struct WitnessDocument {
    pub phi: Vec<String>,
    pub x: Vec<Vec<String>>,
}

/// Input germ. `entries` holds either full rows (entries below the diagonal
/// may be `null`) or upper-triangle rows of decreasing length.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermDocument {
    pub n: usize,
    pub r: usize,
    #[serde(default)]
    pub field: FieldKind,
    pub entries: Vec<Vec<Option<String>>>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub expected_class: Option<String>,
    /// Second germ for `witness`.
    #[serde(default)]
    pub target: Option<Vec<Vec<Option<String>>>>,
    #[serde(default)]
    pub witness: Option<WitnessDocument>,
}

pub fn read_document(path: &Path) -> Result<GermDocument, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Read { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

fn poly(text: &str, r: usize, i: usize, j: usize) -> Result<Poly, InputError> {
    parse_polynomial(text, r).map_err(|source| InputError::Entry { i, j, source })
}

fn matrix_of(rows: &[Vec<Option<String>>], n: usize, r: usize) -> Result<Sym, InputError> {
    if rows.len() != n {
        return Err(InputError::Shape(format!("expected {n} rows, got {}", rows.len())));
    }
    let mut upper = Vec::new();
    let mut below = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let skip = if row.len() == n {
            0
        } else if row.len() == n - i {
            i
        } else {
            return Err(InputError::Shape(format!("row {i} has {} entries; expected {n} or {}", row.len(), n - i)));
        };
        for (k, cell) in row.iter().enumerate() {
            let j = k + skip;
            match (j >= i, cell) {
                (true, Some(t)) => upper.push(poly(t, r, i, j)?),
                (true, None) => return Err(InputError::Shape(format!("entry ({i},{j}) on or above the diagonal is null"))),
                (false, Some(t)) => below.push((i, j, poly(t, r, i, j)?)),
                (false, None) => {}
            }
        }
    }
    let a = SymMatrix::from_upper(n, r, upper)?;
    for (i, j, p) in below {
        if a.get(j, i) != &p {
            return Err(InputError::Shape(format!("entry ({i},{j}) does not match ({j},{i})")));
        }
    }
    Ok(a)
}

impl GermDocument {
    pub fn germ(&self) -> Result<Sym, InputError> {
        if self.n == 0 || self.r == 0 {
            return Err(InputError::Shape("n and r must be positive".into()));
        }
        let a = matrix_of(&self.entries, self.n, self.r)?;
        Ok(SymMatrixGerm::new(a)?.into_matrix())
    }

    pub fn target(&self) -> Result<Option<Sym>, InputError> {
        self.target.as_ref().map(|rows| matrix_of(rows, self.n, self.r)).transpose()
    }

    pub fn witness(&self) -> Result<Option<CongruenceWitness<Q>>, InputError> {
        let Some(w) = &self.witness else { return Ok(None) };
        if w.phi.len() != self.r || w.x.len() != self.n || w.x.iter().any(|row| row.len() != self.n) {
            return Err(InputError::Shape(format!("witness needs {} components of phi and an {n}×{n} matrix x", self.r, n = self.n)));
        }
        let phi = w.phi.iter().enumerate().map(|(k, t)| poly(t, self.r, k, 0)).collect::<Result<Vec<_>, _>>()?;
        let x = w
            .x
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, t)| poly(t, self.r, i, j)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(CongruenceWitness { phi, x: PolyMatrix::from_rows(self.r, x) }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> GermDocument {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn full_and_upper_rows_agree() {
        let full = doc(r#"{"n":2,"r":2,"entries":[["x1","x2^2"],[null,"x1*x2"]]}"#).germ().unwrap();
        let upper = doc(r#"{"n":2,"r":2,"field":"complex","entries":[["x1","x2^2"],["x1*x2"]]}"#).germ().unwrap();
        let mirrored = doc(r#"{"n":2,"r":2,"entries":[["x1","x2^2"],["x2^2","x1*x2"]]}"#).germ().unwrap();
        assert_eq!(full, upper);
        assert_eq!(full, mirrored);
    }

    #[test]
    fn rejects_inconsistent_input() {
        assert!(doc(r#"{"n":2,"r":2,"entries":[["x1","x2"],["x1","x1"]]}"#).germ().is_err());
        assert!(doc(r#"{"n":2,"r":2,"entries":[["1","0"],["x1"]]}"#).germ().is_err());
        assert!(doc(r#"{"n":2,"r":2,"entries":[["x1","x3"],["x1"]]}"#).germ().is_err());
        assert!(doc(r#"{"n":2,"r":2,"entries":[["x1"],["x1"]]}"#).germ().is_err());
        assert!(serde_json::from_str::<GermDocument>(r#"{"n":2,"r":2,"entries":[],"extra":1}"#).is_err());
    }
}
