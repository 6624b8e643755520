//! Finite-element toolkit for the Steklov eigenvalue problem
//!
//! ```text
//! -div(alpha grad u) + beta u = 0   in Omega
//!        alpha du/dn      = lambda u on dOmega
//! ```
//!
//! The crate discretizes the problem with Crouzeix-Raviart (CR), enriched
//! Crouzeix-Raviart (ECR) or conforming P1 elements on structured simplicial
//! meshes, solves the resulting symmetric pencil `A u = lambda B u` and
//! post-processes nonconforming eigenvalues into asymptotic lower bounds
//! `lambda_c = lambda_h / (1 + M / lambda_h)`.
//!
//! Module map:
//!
//! * [`mesh`] catalog domains, uniform refinement, element geometry, ASCII I/O
//! * [`fem`] quadrature, shape functions, local matrices, interpolation
//! * [`assembly`] DOF maps and sparse assembly of the pencil
//! * [`gevp`] generalized eigensolver and dense oracle
//! * [`bounds`] the eigenvalue correction and its diagnostics
//! * [`study`] refinement studies, Richardson references, CSV output

pub mod assembly;
pub mod bounds;
pub mod fem;
pub mod gevp;
pub mod mesh;
pub mod study;

mod error;

pub use error::{Error, Result};
