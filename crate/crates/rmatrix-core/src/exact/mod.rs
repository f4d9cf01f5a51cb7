//! Exact integer and rational linear algebra for lattices.

mod group;
mod lattice;
mod matrix;
mod smith;

pub use group::{format_group_type, FiniteAbelianGroup};
pub use lattice::{
    congruence_lattice, dual_lattice, integer_kernel, is_sublattice, lattice_coordinates, lattice_from_generators,
    lattice_index, lattice_intersection, lattice_sum, lattices_equal, quotient_group, rational_lattice_intersection,
    solve_linear_congruences,
};
pub use matrix::{IntMatrix, RatMatrix};
pub use smith::{hermite_basis, smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("basis does not have full rank")]
    RankDeficient,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("lattice is not contained in the ambient lattice")]
    NotSublattice,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
}
