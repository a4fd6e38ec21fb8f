//! Exact classification engine for germs of families of symmetric matrices.
//!
//! The core types are generic over a [`Scalar`]; exact computations use
//! [`Q`] (arbitrary-precision rationals) and the aliases below.

pub mod catalog;
pub mod detinv;
pub mod linalg;
pub mod pencil;
pub mod polyring;
pub mod quasihom;
pub mod realsig;
pub mod scalar;
pub mod tangent;
pub mod unimodular;

pub use scalar::Scalar;

use num_rational::BigRational;

/// Exact rational scalar.
pub type Q = BigRational;
pub type Poly = polyring::Polynomial<Q>;
pub type Sym = polyring::SymMatrix<Q>;
pub type Germ = polyring::SymMatrixGerm<Q>;
pub type Field = polyring::VectorFieldJet<Q>;
pub type Mat = polyring::PolyMatrix<Q>;
