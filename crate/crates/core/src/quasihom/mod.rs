//! Symmetric quasi-homogeneity: weight systems, the Lie algebra `L𝒟_A` of
//! the stabilizer of `A` in jets, and the trace obstruction.

mod lda;
mod weights;

pub use lda::{lda_jets, sqh_obstruction, LdaJets, SqhCertificate, SqhVerdict};
pub use weights::{qh_check, qh_check_euler, qh_check_monomials, qh_find_diagonal, quasi_degrees, WeightSystem};
