//! Eigenvalue-sign stratification of a real family on a punctured disk and
//! the connected components of a chosen stratum, sampled on a grid.
//!
//! Grid points are rational and every signature is exact: the
//! characteristic polynomial of a real symmetric matrix has only real
//! roots, so Descartes' rule counts its positive roots exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::bareiss::det_rational;
use crate::{Sym, Q};

#[derive(Debug, Error)]
pub enum RealSigError {
    #[error("signature fields need a two-parameter family, got {0} parameters")]
    NotPlanar(usize),
    #[error("grid step and radius must be positive")]
    BadGrid,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Numbers of positive, zero and negative eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Signature(pub usize, pub usize, pub usize);

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

/// Coefficients of `det(t·I − M)`, constant term first.
fn characteristic_polynomial(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::from_integer(1.into());
    // the coefficient of t^(n−k) is (−1)^k times the sum of k×k principal minors
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let sub: Vec<Vec<Q>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let minor = det_rational(&sub);
        coeffs[n - k] += if k % 2 == 0 { minor } else { -minor };
    }
    coeffs
}

/// Signature of a constant real symmetric matrix.
pub fn matrix_signature(m: &[Vec<Q>]) -> Signature {
    let n = m.len();
    let c = characteristic_polynomial(m);
    let zero = c.iter().position(|x| !x.is_zero()).unwrap_or(n);
    let signs: Vec<bool> = c[zero..].iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    let positive = signs.windows(2).filter(|w| w[0] != w[1]).count();
    Signature(positive, zero, n - zero - positive)
}

/// Signature of `A` at a rational parameter value.
pub fn signature_at(a: &Sym, point: &[Q]) -> Signature {
    matrix_signature(&a.eval(point))
}

/// Square grid `(i·h, j·h)` inside the closed disk of radius `radius`,
/// without the cells (squares of side `h` centred at the points) that meet
/// the open disk of radius `puncture`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub radius: Q,
    pub step: Q,
    pub puncture: Q,
}

impl GridSpec {
    /// Puncture radius of four steps.
    pub fn new(radius: Q, step: Q) -> Self {
        let puncture = step.clone() * Q::from_integer(4.into());
        GridSpec { radius, step, puncture }
    }

    pub fn halved(&self) -> Self {
        GridSpec { step: self.step.clone() / Q::from_integer(2.into()), ..self.clone() }
    }

    fn validate(&self) -> Result<(), RealSigError> {
        if self.step.is_positive() && self.radius.is_positive() && !self.puncture.is_negative() {
            Ok(())
        } else {
            Err(RealSigError::BadGrid)
        }
    }

    fn keeps(&self, i: i64, j: i64) -> bool {
        let h = &self.step;
        let (x, y) = (h * Q::from_integer(i.into()), h * Q::from_integer(j.into()));
        if x.clone() * x.clone() + y.clone() * y.clone() > self.radius.clone() * self.radius.clone() {
            return false;
        }
        // nearest point of the cell to the origin
        let half = h / Q::from_integer(2.into());
        let near = |c: Q| {
            if c.abs() <= half {
                Q::zero()
            } else {
                c.abs() - half.clone()
            }
        };
        let (nx, ny) = (near(x), near(y));
        nx.clone() * nx + ny.clone() * ny >= self.puncture.clone() * self.puncture.clone()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub i: i64,
    pub j: i64,
    pub signature: Signature,
}

/// Signatures on every kept grid cell.
#[derive(Clone, Debug)]
pub struct SignatureField {
    pub spec: GridSpec,
    pub n: usize,
    pub cells: Vec<Cell>,
    index: BTreeMap<(i64, i64), usize>,
}

pub fn signature_field(a: &Sym, spec: &GridSpec) -> Result<SignatureField, RealSigError> {
    if a.nvars() != 2 {
        return Err(RealSigError::NotPlanar(a.nvars()));
    }
    spec.validate()?;
    let m = (spec.radius.clone() / spec.step.clone()).floor().to_integer().to_i64().expect("grid fits in i64");
    let mut cells = Vec::new();
    for j in -m..=m {
        for i in -m..=m {
            if spec.keeps(i, j) {
                let point = [&spec.step * Q::from_integer(i.into()), &spec.step * Q::from_integer(j.into())];
                cells.push(Cell { i, j, signature: signature_at(a, &point) });
            }
        }
    }
    let index = cells.iter().enumerate().map(|(k, c)| ((c.i, c.j), k)).collect();
    Ok(SignatureField { spec: spec.clone(), n: a.n(), cells, index })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl SignatureField {
    /// Number of cells of each signature.
    pub fn census(&self) -> BTreeMap<Signature, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.signature).or_insert(0) += 1;
        }
        out
    }

    /// Connected components of the cells with signature `target` under
    /// 4-adjacency.
    pub fn components(&self, target: Signature) -> usize {
        let mut parent: Vec<usize> = (0..self.cells.len()).collect();
        for (k, c) in self.cells.iter().enumerate() {
            if c.signature != target {
                continue;
            }
            for (di, dj) in [(1, 0), (0, 1)] {
                if let Some(&l) = self.index.get(&(c.i + di, c.j + dj)) {
                    if self.cells[l].signature == target {
                        let (a, b) = (find(&mut parent, k), find(&mut parent, l));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..self.cells.len()).filter(|&k| self.cells[k].signature == target && find(&mut parent, k) == k).count()
    }

    fn coordinate(&self, i: i64) -> Q {
        &self.spec.step * Q::from_integer(i.into())
    }

    /// One row `x1,x2,n1,n2,n3` per cell, with exact rational coordinates.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x1,x2,n1,n2,n3\n");
        for c in &self.cells {
            let Signature(p, z, m) = c.signature;
            writeln!(out, "{},{},{p},{z},{m}", self.coordinate(c.i), self.coordinate(c.j)).expect("writing to a string");
        }
        out
    }

    /// Cells coloured by signature, `x1` horizontal and `x2` upwards.
    pub fn to_svg(&self) -> String {
        let m = self.cells.iter().map(|c| c.i.abs().max(c.j.abs())).max().unwrap_or(0);
        let px = (600 / (2 * m + 1)).max(1);
        let size = px * (2 * m + 1);
        let palette = ["#d7301f", "#fdae61", "#fee08b", "#abd9e9", "#2c7bb6", "#1a9850", "#762a83", "#999999"];
        let mut colours: BTreeMap<Signature, &str> = BTreeMap::new();
        for (k, s) in self.census().keys().enumerate() {
            colours.insert(*s, palette[k % palette.len()]);
        }
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" shape-rendering=\"crispEdges\">",
            size,
            size + 20 * colours.len() as i64 + 10
        )
        .expect("writing to a string");
        for c in &self.cells {
            let x = (c.i + m) * px;
            let y = (m - c.j) * px;
            writeln!(out, "<rect x=\"{x}\" y=\"{y}\" width=\"{px}\" height=\"{px}\" fill=\"{}\"/>", colours[&c.signature])
                .expect("writing to a string");
        }
        let mid = m * px + px / 2;
        writeln!(out, "<line x1=\"0\" y1=\"{mid}\" x2=\"{size}\" y2=\"{mid}\" stroke=\"black\"/>").expect("writing to a string");
        writeln!(out, "<line x1=\"{mid}\" y1=\"0\" x2=\"{mid}\" y2=\"{size}\" stroke=\"black\"/>").expect("writing to a string");
        writeln!(out, "<text x=\"{}\" y=\"{}\" font-size=\"12\">x1</text>", size - 16, mid - 4).expect("writing to a string");
        writeln!(out, "<text x=\"{}\" y=\"12\" font-size=\"12\">x2</text>", mid + 4).expect("writing to a string");
        for (k, (s, colour)) in colours.iter().enumerate() {
            let y = size + 10 + 20 * k as i64;
            writeln!(out, "<rect x=\"4\" y=\"{y}\" width=\"14\" height=\"14\" fill=\"{colour}\"/>").expect("writing to a string");
            writeln!(out, "<text x=\"24\" y=\"{}\" font-size=\"12\">{s}</text>", y + 12).expect("writing to a string");
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Component count of one stratum, with the cell total behind it.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub target: Signature,
    pub components: usize,
    pub target_cells: usize,
    pub total_cells: usize,
    pub warning: Option<String>,
}

pub fn component_count(a: &Sym, target: Signature, spec: &GridSpec) -> Result<ComponentReport, RealSigError> {
    let field = signature_field(a, spec)?;
    let target_cells = field.census().get(&target).copied().unwrap_or(0);
    let warning = (target_cells == 0).then(|| format!("no cell has signature {target}"));
    Ok(ComponentReport { target, components: field.components(target), target_cells, total_cells: field.cells.len(), warning })
}

pub fn signature_svg(a: &Sym, spec: &GridSpec, path: &Path) -> Result<(), RealSigError> {
    let field = signature_field(a, spec)?;
    std::fs::write(path, field.to_svg())?;
    Ok(())
}
