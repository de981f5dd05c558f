//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers or rationals; no
//! floating point is involved. The kernel serves the lattice engine
//! (discriminant groups, complements, saturation) and the homology
//! computations (cycle spaces, intersection forms).

mod matrix;
mod normal_form;

pub use matrix::{IntMatrix, QMatrix};
pub use normal_form::{
    column_lattice_index, hermite_normal_form, inertia, integer_kernel, integer_solve,
    rational_solve, row_lattice_basis, saturate, saturation_index, smith_normal_form,
    unimodular_inverse, Inertia, SnfResult,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("rows are linearly dependent")]
    DependentRows,
}
