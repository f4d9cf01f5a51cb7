//! Exact classification of Cartan-part R-matrices for small quantum groups.

pub mod classifier;
pub mod exact;
pub mod lattice_theory;
pub mod oracle;
pub mod pairings;
pub mod root_systems;

pub use exact::{FiniteAbelianGroup, IntMatrix, LatticeError, RatMatrix, SmithDecomposition};
