//! Exact sparse multivariate polynomials, symmetric polynomial matrices and
//! polynomial vector fields.

mod matrix;
mod monomial;
mod parse;
mod polynomial;

pub use matrix::{sym_dim, sym_positions, MatrixError, PolyMatrix, SymMatrix, SymMatrixGerm, VectorFieldJet};
pub use monomial::Monomial;
pub use parse::{parse_polynomial, ParseError};
pub use polynomial::Polynomial;
