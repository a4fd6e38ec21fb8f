//! Volume-preserving refinement: congruence witnesses, divergence modules,
//! orientation-reversing symmetries and the splitting of classes.

mod divergence;
mod search;
mod splitting;
mod symbolic;
mod witness;

pub use divergence::{divergence_module, divergence_module_with, moduli_quotient_dim, DivergenceModule, ModuliReport};
pub use search::{congruence_search, orientation_reversing_search, SearchBudget, SearchOutcome};
pub use witness::{CongruenceWitness, Verification, WitnessError};
pub use splitting::{unimodular_splitting, SplittingError, SplittingRecord};
pub use symbolic::{orientation_argument, Branch, BranchOutcome, GenericSelfMap, OrientationProof};
