//! Exact linear algebra: dense matrices, sparse echelon subspaces over jet
//! coordinates, fraction-free integer elimination and Fourier–Motzkin
//! feasibility.

pub mod bareiss;
mod coords;
mod dense;
mod fm;
mod sparse;

pub use coords::JetCoords;
pub use dense::{Matrix, Rref};
pub use fm::{feasible_point, primitive_integer_vector, Inequality};
pub use sparse::{kernel, JetSubspace, SparseVec, SubspaceError};
