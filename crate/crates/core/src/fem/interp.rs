//! CR interpolation, piecewise-constant projection and the explicit
//! interpolation-error constants.

use super::coefficient::CoefficientField;
use super::quadrature::{quadrature, QuadratureKind};
use crate::mesh::{ElementGeometry, SimplicialMesh};
use crate::Result;

/// Poincare-type constant for the CR interpolation error,
/// `||u - I_h u||_K <= C |u - I_h u|_{1,K}`.
pub const POINCARE_FACTOR_2D: f64 = 0.1893;
pub const POINCARE_FACTOR_3D: f64 = 0.3804;
/// Trace constant factors, `||u - I_h u||_e <= C h_K / sqrt(H_K) |u - I_h u|_{1,K}`.
pub const TRACE_FACTOR_2D: f64 = 0.6711;
pub const TRACE_FACTOR_3D: f64 = 1.0931;

pub fn interp_constant_poincare(geom: &ElementGeometry) -> f64 {
    poincare_constant(geom.dim, geom.diameter)
}

pub fn poincare_constant(dim: usize, diameter: f64) -> f64 {
    let factor = if dim == 2 {
        POINCARE_FACTOR_2D
    } else {
        POINCARE_FACTOR_3D
    };
    factor * diameter
}

pub fn interp_constant_trace(geom: &ElementGeometry, face: usize) -> f64 {
    let factor = if geom.dim == 2 {
        TRACE_FACTOR_2D
    } else {
        TRACE_FACTOR_3D
    };
    factor * geom.diameter / geom.heights[face].sqrt()
}

/// CR interpolant: one value per mesh face, the face mean of `u`.
pub fn cr_interpolate(
    mesh: &SimplicialMesh,
    u: impl Fn(&[f64]) -> f64,
    degree: usize,
) -> Result<Vec<f64>> {
    let rule = quadrature(mesh.dim(), QuadratureKind::Face, degree.max(4))?;
    let out = (0..mesh.n_faces())
        .map(|f| {
            let verts = mesh.face(f);
            rule.iter()
                .map(|(b, w)| {
                    let mut x = [0.0; 3];
                    for (bi, &v) in b.iter().zip(verts) {
                        let p = mesh.point(v);
                        for k in 0..3 {
                            x[k] += bi * p[k];
                        }
                    }
                    w * u(&x[..mesh.dim()])
                })
                .sum()
        })
        .collect();
    Ok(out)
}

/// How the piecewise-constant operator `I_0` picks its value per cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ProjectionMode {
    /// Cell mean (L2 projection onto constants).
    #[default]
    Mean,
    /// Value at the centroid.
    Barycenter,
}

/// `I_0 f` on every cell.
pub fn piecewise_const_project(
    f: &CoefficientField,
    mesh: &SimplicialMesh,
    degree: usize,
    mode: ProjectionMode,
) -> Result<Vec<f64>> {
    let rule = quadrature(mesh.dim(), QuadratureKind::Cell, degree)?;
    (0..mesh.n_cells())
        .map(|c| {
            let geom = ElementGeometry::new(mesh, c)?;
            Ok(cell_value(f, &geom, &rule, mode))
        })
        .collect()
}

pub(crate) fn cell_value(
    f: &CoefficientField,
    geom: &ElementGeometry,
    rule: &super::quadrature::QuadratureRule,
    mode: ProjectionMode,
) -> f64 {
    if f.coefficient.is_constant() {
        return f.eval(&geom.centroid[..geom.dim]);
    }
    match mode {
        ProjectionMode::Mean => rule
            .iter()
            .map(|(b, w)| w * f.eval(&geom.point(b)[..geom.dim]))
            .sum(),
        ProjectionMode::Barycenter => f.eval(&geom.centroid[..geom.dim]),
    }
}
