use super::basis::LocalBasis;
use super::coefficient::CoefficientField;
use super::quadrature::QuadratureRule;
use crate::mesh::ElementGeometry;
use crate::{Error, Result};

/// Largest local space (ECR on a tetrahedron).
pub const MAX_LOCAL: usize = 5;

pub type LocalMatrix = [[f64; MAX_LOCAL]; MAX_LOCAL];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMatrices {
    pub n: usize,
    /// `int_K alpha grad phi_i . grad phi_j`
    pub stiffness: LocalMatrix,
    /// `int_K beta phi_i phi_j`
    pub mass: LocalMatrix,
}

/// Element stiffness and volume mass by quadrature.
///
/// Coefficient values below their declared lower bound are rejected; the
/// returned error carries `usize::MAX` as cell index, callers substitute it.
pub fn local_matrices(
    geom: &ElementGeometry,
    basis: &LocalBasis,
    alpha: &CoefficientField,
    beta: &CoefficientField,
    rule: &QuadratureRule,
) -> Result<LocalMatrices> {
    let n = basis.len();
    let mut out = LocalMatrices {
        n,
        stiffness: [[0.0; MAX_LOCAL]; MAX_LOCAL],
        mass: [[0.0; MAX_LOCAL]; MAX_LOCAL],
    };
    let mut v = [0.0; MAX_LOCAL];
    let mut g = [[0.0; 3]; MAX_LOCAL];
    for (b, w) in rule.iter() {
        let x = geom.point(b);
        let xs = &x[..geom.dim];
        let a = checked(alpha, xs, "alpha")?;
        let c = checked(beta, xs, "beta")?;
        basis.values(&x, &mut v);
        basis.gradients(&x, &mut g);
        let wk = w * geom.measure;
        for i in 0..n {
            for j in i..n {
                let gg = g[i][0] * g[j][0] + g[i][1] * g[j][1] + g[i][2] * g[j][2];
                out.stiffness[i][j] += wk * a * gg;
                out.mass[i][j] += wk * c * v[i] * v[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            out.stiffness[i][j] = out.stiffness[j][i];
            out.mass[i][j] = out.mass[j][i];
        }
    }
    Ok(out)
}

fn checked(field: &CoefficientField, x: &[f64], name: &'static str) -> Result<f64> {
    let value = field.eval(x);
    if value >= field.lower_bound {
        Ok(value)
    } else {
        Err(Error::CoefficientBelowBound {
            name,
            cell: usize::MAX,
            value,
            bound: field.lower_bound,
        })
    }
}

/// `int_e phi_i phi_j ds` over local face `face`. All local functions may
/// have a nonzero trace on `e`.
pub fn local_boundary_mass(
    geom: &ElementGeometry,
    basis: &LocalBasis,
    face: usize,
    face_rule: &QuadratureRule,
) -> LocalMatrix {
    let n = basis.len();
    let mut m = [[0.0; MAX_LOCAL]; MAX_LOCAL];
    let mut v = [0.0; MAX_LOCAL];
    let area = geom.face_measures[face];
    for (b, w) in face_rule.iter() {
        basis.values(&geom.face_point(face, b), &mut v);
        for i in 0..n {
            for j in i..n {
                m[i][j] += w * area * v[i] * v[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::basis::{cr_basis, ecr_basis, p1_basis};
    use crate::fem::coefficient::Coefficient;
    use crate::fem::quadrature::{quadrature, QuadratureKind};

    fn unit_triangle() -> ElementGeometry {
        let v = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3]];
        ElementGeometry::from_vertices(2, &v).unwrap()
    }

    fn ones() -> CoefficientField {
        CoefficientField::constant(1.0).unwrap()
    }

    #[test]
    fn cr_unit_triangle() {
        let g = unit_triangle();
        let rule = quadrature(2, QuadratureKind::Cell, 4).unwrap();
        let lm = local_matrices(&g, &cr_basis(&g), &ones(), &ones(), &rule).unwrap();
        let expect = [[4.0, -2.0, -2.0], [-2.0, 2.0, 0.0], [-2.0, 0.0, 2.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((lm.stiffness[i][j] - expect[i][j]).abs() < 1e-14);
                let m = if i == j { 1.0 / 6.0 } else { 0.0 };
                assert!((lm.mass[i][j] - m).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cr_mass_is_diagonal_on_any_triangle() {
        let v = [[0.3, -0.2, 0.0], [2.1, 0.4, 0.0], [0.9, 1.7, 0.0], [0.0; 3]];
        let g = ElementGeometry::from_vertices(2, &v).unwrap();
        let rule = quadrature(2, QuadratureKind::Cell, 2).unwrap();
        let lm = local_matrices(&g, &cr_basis(&g), &ones(), &ones(), &rule).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let m = if i == j { g.measure / 3.0 } else { 0.0 };
                assert!((lm.mass[i][j] - m).abs() < 1e-14 * g.measure);
            }
        }
    }

    #[test]
    fn cr_mass_is_not_diagonal_on_tetrahedra() {
        let v = [[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let g = ElementGeometry::from_vertices(3, &v).unwrap();
        let rule = quadrature(3, QuadratureKind::Cell, 2).unwrap();
        let lm = local_matrices(&g, &cr_basis(&g), &ones(), &ones(), &rule).unwrap();
        assert!(lm.mass[0][1].abs() > 1e-3);
    }

    #[test]
    fn p1_rows_sum_to_zero() {
        let v = [[0.3, -0.2, 0.0], [2.1, 0.4, 0.0], [0.9, 1.7, 0.0], [0.0; 3]];
        let g = ElementGeometry::from_vertices(2, &v).unwrap();
        let rule = quadrature(2, QuadratureKind::Cell, 4).unwrap();
        let alpha =
            CoefficientField::new("affine:2,0.1,0.3".parse::<Coefficient>().unwrap(), 1.0).unwrap();
        let lm = local_matrices(&g, &p1_basis(&g), &alpha, &ones(), &rule).unwrap();
        for i in 0..3 {
            assert!(lm.stiffness[i][..3].iter().sum::<f64>().abs() < 1e-13);
        }
    }

    #[test]
    fn coefficient_below_bound() {
        let g = unit_triangle();
        let rule = quadrature(2, QuadratureKind::Cell, 4).unwrap();
        let alpha = CoefficientField::new(Coefficient::Const(0.5), 1.0).unwrap();
        assert!(matches!(
            local_matrices(&g, &cr_basis(&g), &alpha, &ones(), &rule),
            Err(Error::CoefficientBelowBound { name: "alpha", .. })
        ));
    }

    #[test]
    fn cr_boundary_mass_on_hypotenuse() {
        let g = unit_triangle();
        let rule = quadrature(2, QuadratureKind::Face, 4).unwrap();
        let m = local_boundary_mass(&g, &cr_basis(&g), 0, &rule);
        let l = 2f64.sqrt();
        let expect = [
            [l, 0.0, 0.0],
            [0.0, l / 3.0, -l / 3.0],
            [0.0, -l / 3.0, l / 3.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - expect[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn boundary_mass_against_constants() {
        // row sums give int_e phi_i ds; CR: |e| for the face function, 0 else
        let v = [
            [0.3, -0.2, 0.1],
            [2.1, 0.4, 0.0],
            [0.9, 1.7, 0.2],
            [0.5, 0.6, 1.4],
        ];
        let g = ElementGeometry::from_vertices(3, &v).unwrap();
        let rule = quadrature(3, QuadratureKind::Face, 4).unwrap();
        for face in 0..4 {
            let m = local_boundary_mass(&g, &cr_basis(&g), face, &rule);
            for i in 0..4 {
                let s: f64 = m[i][..4].iter().sum();
                let e = if i == face {
                    g.face_measures[face]
                } else {
                    0.0
                };
                assert!((s - e).abs() < 1e-13);
            }
            // ECR: sum of all face functions is 1 - (sum of cell function) on e
            let basis = ecr_basis(&g).unwrap();
            let m = local_boundary_mass(&g, &basis, face, &rule);
            let total: f64 = (0..5).map(|i| (0..5).map(|j| m[i][j]).sum::<f64>()).sum();
            // constant 1 = sum of face functions + cell function
            assert!((total - g.face_measures[face]).abs() < 1e-12);
        }
    }

    #[test]
    fn p1_edge_mass() {
        let g = unit_triangle();
        let rule = quadrature(2, QuadratureKind::Face, 4).unwrap();
        // face 2 is the edge (0,0)-(1,0) between vertices 0 and 1
        let m = local_boundary_mass(&g, &p1_basis(&g), 2, &rule);
        let expect = [
            [2.0 / 6.0, 1.0 / 6.0, 0.0],
            [1.0 / 6.0, 2.0 / 6.0, 0.0],
            [0.0; 3],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[i][j] - expect[i][j]).abs() < 1e-15);
            }
        }
    }
}
