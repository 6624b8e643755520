//! Local finite-element machinery.

pub mod basis;
pub mod coefficient;
pub mod interp;
pub mod local;
pub mod quadrature;

pub use basis::{cr_basis, ecr_basis, p1_basis, ElementKind, LocalBasis, ShapeFunction};
pub use coefficient::{Coefficient, CoefficientField};
pub use interp::{
    cr_interpolate, interp_constant_poincare, interp_constant_trace, piecewise_const_project,
    poincare_constant, ProjectionMode,
};
pub use local::{local_boundary_mass, local_matrices, LocalMatrices, LocalMatrix, MAX_LOCAL};
pub use quadrature::{quadrature, QuadratureKind, QuadratureRule, DEFAULT_DEGREE};
