//! Brute-force references: 2-D quadrature, truncated-Fock matrix
//! exponentials and exact series summation.

mod matrix;
mod quad;
mod series;

pub use matrix::{operator_matrix, OperatorKind, OperatorMatrix};
pub use quad::{
    fock_rotation_propagator, gauss_legendre, quad_overlap_2d, quad_overlap_fixed, QuadKind,
    QUAD_TOL,
};
pub use series::{series_displacement_element, SERIES_MAX_INDEX};
