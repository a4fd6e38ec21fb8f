use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use super::{parse_polynomial, Monomial, ParseError, Polynomial};
use crate::scalar::Scalar;

/// Rectangular matrix of polynomials in a common ring.
#[derive(Clone, PartialEq, Debug)]
pub struct PolyMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Polynomial<S>>,
}

impl<S: Scalar> PolyMatrix<S> {
    pub fn zero(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![Polynomial::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zero(n, n, nvars);
        for i in 0..n {
            m.set(i, i, Polynomial::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Polynomial<S>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), r * c, "ragged rows");
        PolyMatrix { rows: r, cols: c, nvars, entries }
    }

    /// Constant matrix.
    pub fn from_scalars(nvars: usize, rows: &[Vec<S>]) -> Self {
        Self::from_rows(
            nvars,
            rows.iter()
                .map(|row| row.iter().map(|c| Polynomial::constant(nvars, c.clone())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<S>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_truncated(rhs, None)
    }

    /// Product with every entry truncated above degree `d` when given.
    pub fn mul_truncated(&self, rhs: &Self, d: Option<u32>) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, rhs.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Polynomial::zero(self.nvars);
                for k in 0..self.cols {
                    let t = match d {
                        Some(d) => self.get(i, k).mul_truncated(rhs.get(k, j), d),
                        None => self.get(i, k) * rhs.get(k, j),
                    };
                    acc = &acc + &t;
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Polynomial<S>) -> Polynomial<S>) -> Self {
        let entries: Vec<_> = self.entries.iter().map(f).collect();
        let nvars = entries.first().map_or(self.nvars, Polynomial::nvars);
        PolyMatrix { rows: self.rows, cols: self.cols, nvars, entries }
    }

    pub fn truncate(&self, d: u32) -> Self {
        self.map(|p| p.truncate(d))
    }

    /// Value at the origin.
    pub fn at_origin(&self) -> Vec<Vec<S>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).constant_term()).collect())
            .collect()
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Polynomial<S> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, &idx)
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Polynomial<S> {
        debug_assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => Polynomial::one(self.nvars),
            1 => self.get(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = Polynomial::zero(self.nvars);
                for (k, &c) in cols.iter().enumerate() {
                    let e = self.get(rows[0], c);
                    if e.is_zero() {
                        continue;
                    }
                    let rest_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let t = e * &self.minor_det(&rows[1..], &rest_cols);
                    acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                acc
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry ({i},{j}) has nonzero constant term; a germ must vanish at the origin")]
    NonzeroAtOrigin { i: usize, j: usize },
    #[error("expected {expected} upper-triangle entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("entry ({i},{j}): {source}")]
    Parse {
        i: usize,
        j: usize,
        #[source]
        source: ParseError,
    },
    #[error("entries ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
}

/// Symmetric `n×n` matrix of polynomials, stored as its upper triangle in
/// row-major order.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix<S: Scalar> {
    n: usize,
    nvars: usize,
    upper: Vec<Polynomial<S>>,
}

/// Number of independent entries of an `n×n` symmetric matrix.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Pairs `(i, j)` with `i <= j` in row-major order; position `k` in the list
/// is the storage index of that entry.
pub fn sym_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sym_dim(n));
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

impl<S: Scalar> SymMatrix<S> {
    pub fn zero(n: usize, nvars: usize) -> Self {
        SymMatrix { n, nvars, upper: vec![Polynomial::zero(nvars); sym_dim(n)] }
    }

    pub fn from_upper(n: usize, nvars: usize, upper: Vec<Polynomial<S>>) -> Result<Self, MatrixError> {
        if upper.len() != sym_dim(n) {
            return Err(MatrixError::EntryCount { expected: sym_dim(n), found: upper.len() });
        }
        Ok(SymMatrix { n, nvars, upper })
    }

    /// Parses upper-triangle entries given row by row, e.g.
    /// `[["x1", "x2^2"], ["x1*x2"]]` for a `2×2` matrix.
    pub fn parse(n: usize, nvars: usize, rows: &[&[&str]]) -> Result<Self, MatrixError> {
        let mut upper = Vec::with_capacity(sym_dim(n));
        for (i, row) in rows.iter().enumerate() {
            for (k, text) in row.iter().enumerate() {
                let j = i + k;
                upper.push(parse_polynomial(text, nvars).map_err(|source| MatrixError::Parse { i, j, source })?);
            }
        }
        Self::from_upper(n, nvars, upper)
    }

    /// Symmetric part check plus conversion from a full matrix.
    pub fn from_full(m: &PolyMatrix<S>) -> Result<Self, MatrixError> {
        let n = m.rows();
        let mut upper = Vec::with_capacity(sym_dim(n));
        for (i, j) in sym_positions(n) {
            if m.get(i, j) != m.get(j, i) {
                return Err(MatrixError::NotSymmetric { i, j });
            }
            upper.push(m.get(i, j).clone());
        }
        Ok(SymMatrix { n, nvars: m.nvars(), upper })
    }

    pub fn diagonal(entries: Vec<Polynomial<S>>) -> Self {
        let n = entries.len();
        let nvars = entries.first().map_or(0, Polynomial::nvars);
        let mut m = Self::zero(n, nvars);
        for (i, p) in entries.into_iter().enumerate() {
            m.set(i, i, p);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<S> {
        &self.upper[self.storage_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<S>) {
        let k = self.storage_index(i, j);
        self.upper[k] = p;
    }

    fn storage_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // rows before i hold n + (n-1) + ... + (n-i+1) entries
        i * self.n - i * i.saturating_sub(1) / 2 + (j - i)
    }

    /// Upper-triangle entries in storage order.
    pub fn upper(&self) -> &[Polynomial<S>] {
        &self.upper
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Polynomial::is_zero)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.upper.iter().all(|p| p.constant_term().is_zero())
    }

    pub fn to_full(&self) -> PolyMatrix<S> {
        let mut m = PolyMatrix::zero(self.n, self.n, self.nvars);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&Polynomial<S>) -> Polynomial<S>) -> Self {
        let upper: Vec<_> = self.upper.iter().map(f).collect();
        let nvars = upper.first().map_or(self.nvars, Polynomial::nvars);
        SymMatrix { n: self.n, nvars, upper }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(&Polynomial<S>, &Polynomial<S>) -> Polynomial<S>) -> Self {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            nvars: self.nvars,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn truncate(&self, d: u32) -> Self {
        self.map(|p| p.truncate(d))
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.map(|p| p.homogeneous_part(d))
    }

    /// Lowest degree of a nonzero term over all entries.
    pub fn order(&self) -> Option<u32> {
        self.upper.iter().filter_map(Polynomial::order).min()
    }

    pub fn degree(&self) -> Option<u32> {
        self.upper.iter().filter_map(Polynomial::degree).max()
    }

    /// `A ∘ Φ`.
    pub fn compose(&self, phi: &[Polynomial<S>]) -> Self {
        self.map(|p| p.compose(phi))
    }

    /// `Xᵀ A X` for a square polynomial matrix `X`.
    pub fn congruence(&self, x: &PolyMatrix<S>) -> Self {
        let full = x.transpose().mul(&self.to_full()).mul(x);
        SymMatrix::from_full(&full).expect("congruence preserves symmetry")
    }

    /// `dA(V)`: each entry differentiated along `V`.
    pub fn differential(&self, v: &VectorFieldJet<S>) -> Self {
        self.map(|p| v.apply(p))
    }

    pub fn det(&self) -> Polynomial<S> {
        self.to_full().det()
    }

    /// Matrix of constant coefficients attached to monomial `m`.
    pub fn coefficient_matrix(&self, m: &Monomial) -> Vec<Vec<S>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).coeff(m)).collect()).collect()
    }

    pub fn eval(&self, point: &[S]) -> Vec<Vec<S>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).eval(point)).collect()).collect()
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> SymMatrix<T> {
        SymMatrix { n: self.n, nvars: self.nvars, upper: self.upper.iter().map(|p| p.map_coeffs(f)).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|p| p.scale(c))
    }
}

impl<S: Scalar> fmt::Display for SymMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A symmetric matrix family with `A(0) = 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrixGerm<S: Scalar>(SymMatrix<S>);

impl<S: Scalar> SymMatrixGerm<S> {
    pub fn new(m: SymMatrix<S>) -> Result<Self, MatrixError> {
        for (k, (i, j)) in sym_positions(m.n()).into_iter().enumerate() {
            if !m.upper()[k].constant_term().is_zero() {
                return Err(MatrixError::NonzeroAtOrigin { i, j });
            }
        }
        Ok(SymMatrixGerm(m))
    }

    pub fn parse(n: usize, nvars: usize, rows: &[&[&str]]) -> Result<Self, MatrixError> {
        Self::new(SymMatrix::parse(n, nvars, rows)?)
    }

    pub fn matrix(&self) -> &SymMatrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> SymMatrix<S> {
        self.0
    }
}

impl<S: Scalar> Deref for SymMatrixGerm<S> {
    type Target = SymMatrix<S>;
    fn deref(&self) -> &SymMatrix<S> {
        &self.0
    }
}

impl<S: Scalar> fmt::Display for SymMatrixGerm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Polynomial vector field `Σ Vᵢ ∂/∂xᵢ`.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorFieldJet<S: Scalar> {
    components: Vec<Polynomial<S>>,
}

impl<S: Scalar> VectorFieldJet<S> {
    pub fn new(components: Vec<Polynomial<S>>) -> Self {
        VectorFieldJet { components }
    }

    pub fn zero(nvars: usize) -> Self {
        VectorFieldJet { components: vec![Polynomial::zero(nvars); nvars] }
    }

    /// `m ∂/∂x_{i+1}`.
    pub fn monomial(m: Monomial, i: usize) -> Self {
        let nvars = m.nvars();
        let mut v = Self::zero(nvars);
        v.components[i] = Polynomial::term(m, S::one());
        v
    }

    /// Generalized Euler field `Σ λᵢ xᵢ ∂/∂xᵢ`.
    pub fn euler(weights: &[i64]) -> Self {
        let r = weights.len();
        VectorFieldJet {
            components: weights
                .iter()
                .enumerate()
                .map(|(i, &w)| Polynomial::var(r, i).scale(&S::from_i64(w)))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial<S>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Directional derivative `V(f) = Σ Vᵢ ∂f/∂xᵢ`.
    pub fn apply(&self, f: &Polynomial<S>) -> Polynomial<S> {
        let mut acc = Polynomial::zero(f.nvars());
        for (i, vi) in self.components.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            acc = &acc + &(vi * &f.partial(i));
        }
        acc
    }

    pub fn divergence(&self) -> Polynomial<S> {
        let mut acc = Polynomial::zero(self.nvars());
        for (i, vi) in self.components.iter().enumerate() {
            acc = &acc + &vi.partial(i);
        }
        acc
    }

    /// Jacobian of `V` at the origin: entry `[i][j]` is `∂Vᵢ/∂xⱼ(0)`.
    pub fn linear_part(&self) -> Vec<Vec<S>> {
        let r = self.nvars();
        self.components
            .iter()
            .map(|vi| (0..r).map(|j| vi.coeff(&Monomial::var(r, j))).collect())
            .collect()
    }

    pub fn linear_trace(&self) -> S {
        let lp = self.linear_part();
        (0..lp.len()).fold(S::zero(), |acc, i| acc + lp[i][i].clone())
    }

    pub fn scale_by(&self, f: &Polynomial<S>) -> Self {
        VectorFieldJet { components: self.components.iter().map(|c| c * f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorFieldJet { components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect() }
    }

    pub fn truncate(&self, d: u32) -> Self {
        VectorFieldJet { components: self.components.iter().map(|c| c.truncate(d)).collect() }
    }
}

impl<S: Scalar> fmt::Display for VectorFieldJet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*d/dx{}", c, i + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
