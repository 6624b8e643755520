//! Local shape functions.
//!
//! Every supported shape function has the form
//! `c + g . (x - x_K) + q |x - x_K|^2` with `x_K` the cell centroid, which
//! covers P1, CR and the ECR enrichment `P1 + span{sum x_i^2}`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::Matrix5;

use super::quadrature::{quadrature, QuadratureKind, QuadratureRule};
use crate::mesh::ElementGeometry;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Crouzeix-Raviart: face means of P1.
    Cr,
    /// Enriched Crouzeix-Raviart: face means and cell mean of P1 + bubble.
    Ecr,
    /// Conforming Lagrange P1.
    P1,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Cr => "cr",
            ElementKind::Ecr => "ecr",
            ElementKind::P1 => "p1",
        }
    }

    /// Local space dimension.
    pub fn n_local(self, dim: usize) -> usize {
        match self {
            ElementKind::Cr | ElementKind::P1 => dim + 1,
            ElementKind::Ecr => dim + 2,
        }
    }

    pub fn basis(self, geom: &ElementGeometry) -> Result<LocalBasis> {
        match self {
            ElementKind::Cr => Ok(cr_basis(geom)),
            ElementKind::Ecr => ecr_basis(geom),
            ElementKind::P1 => Ok(p1_basis(geom)),
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cr" => Ok(ElementKind::Cr),
            "ecr" => Ok(ElementKind::Ecr),
            "p1" => Ok(ElementKind::P1),
            _ => Err(Error::InvalidArgument(format!("unknown element `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShapeFunction {
    pub constant: f64,
    pub gradient: [f64; 3],
    pub bubble: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalBasis {
    pub dim: usize,
    pub center: [f64; 3],
    pub functions: Vec<ShapeFunction>,
}

impl LocalBasis {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Values of all shape functions at `x`, written to `out`.
    pub fn values(&self, x: &[f64; 3], out: &mut [f64]) {
        let (dx, r2) = self.offset(x);
        for (o, f) in out.iter_mut().zip(&self.functions) {
            *o = f.constant + dot(&f.gradient, &dx) + f.bubble * r2;
        }
    }

    /// Gradients of all shape functions at `x`.
    pub fn gradients(&self, x: &[f64; 3], out: &mut [[f64; 3]]) {
        let (dx, _) = self.offset(x);
        for (o, f) in out.iter_mut().zip(&self.functions) {
            for k in 0..3 {
                o[k] = f.gradient[k] + 2.0 * f.bubble * dx[k];
            }
        }
    }

    /// Value of the finite-element function with local coefficients `coef`.
    pub fn eval(&self, coef: &[f64], x: &[f64; 3]) -> f64 {
        let mut v = [0.0; 5];
        self.values(x, &mut v);
        coef.iter().zip(&v).map(|(c, v)| c * v).sum()
    }

    pub fn eval_gradient(&self, coef: &[f64], x: &[f64; 3]) -> [f64; 3] {
        let mut g = [[0.0; 3]; 5];
        self.gradients(x, &mut g);
        let mut out = [0.0; 3];
        for (c, g) in coef.iter().zip(&g) {
            for k in 0..3 {
                out[k] += c * g[k];
            }
        }
        out
    }

    fn offset(&self, x: &[f64; 3]) -> ([f64; 3], f64) {
        let mut dx = [0.0; 3];
        for k in 0..self.dim {
            dx[k] = x[k] - self.center[k];
        }
        (dx, dot(&dx, &dx))
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Barycentric hat functions `lambda_i`.
pub fn p1_basis(geom: &ElementGeometry) -> LocalBasis {
    let n = geom.dim + 1;
    LocalBasis {
        dim: geom.dim,
        center: geom.centroid,
        functions: (0..n)
            .map(|i| ShapeFunction {
                constant: 1.0 / n as f64,
                gradient: geom.barycentric_gradients[i],
                bubble: 0.0,
            })
            .collect(),
    }
}

/// Crouzeix-Raviart functions `1 - d lambda_i`; function `i` has mean one on
/// face `i` (opposite vertex `i`) and mean zero on the others.
pub fn cr_basis(geom: &ElementGeometry) -> LocalBasis {
    let d = geom.dim as f64;
    let n = geom.dim + 1;
    LocalBasis {
        dim: geom.dim,
        center: geom.centroid,
        functions: (0..n)
            .map(|i| ShapeFunction {
                constant: 1.0 - d / n as f64,
                gradient: geom.barycentric_gradients[i].map(|g| -d * g),
                bubble: 0.0,
            })
            .collect(),
    }
}

/// Enriched Crouzeix-Raviart basis dual to the face means (first `d + 1`
/// functions, face `i` opposite vertex `i`) and the cell mean (last one).
pub fn ecr_basis(geom: &ElementGeometry) -> Result<LocalBasis> {
    let dim = geom.dim;
    let n = dim + 2;
    // Monomials: 1, (x - c)_k, |x - c|^2, all scaled by h to keep the
    // duality matrix well conditioned.
    let h = geom.diameter;
    let rows = ecr_dof_matrix(geom, h)?;
    let inv = rows
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("singular ECR duality system".into()))?;
    let functions = (0..n)
        .map(|j| {
            let col = inv.column(j);
            let mut gradient = [0.0; 3];
            for k in 0..dim {
                gradient[k] = col[1 + k] / h;
            }
            ShapeFunction {
                constant: col[0],
                gradient,
                bubble: col[dim + 1] / (h * h),
            }
        })
        .collect();
    Ok(LocalBasis {
        dim,
        center: geom.centroid,
        functions,
    })
}

/// Matrix of ECR degrees of freedom applied to the scaled monomials. In
/// 2D the unused last row and column hold the identity.
fn ecr_dof_matrix(geom: &ElementGeometry, h: f64) -> Result<Matrix5<f64>> {
    let dim = geom.dim;
    let n = dim + 2;
    let monomials = |x: &[f64; 3]| -> [f64; 5] {
        let mut m = [0.0; 5];
        m[0] = 1.0;
        let mut r2 = 0.0;
        for k in 0..dim {
            let t = (x[k] - geom.centroid[k]) / h;
            m[1 + k] = t;
            r2 += t * t;
        }
        m[dim + 1] = r2;
        m
    };
    let (face_rule, cell_rule) = duality_rules(dim)?;
    let mut d = Matrix5::identity();
    for i in 0..n {
        d[(i, i)] = 0.0;
    }
    for i in 0..=dim {
        for (b, w) in face_rule.iter() {
            let m = monomials(&geom.face_point(i, b));
            for j in 0..n {
                d[(i, j)] += w * m[j];
            }
        }
    }
    for (b, w) in cell_rule.iter() {
        let m = monomials(&geom.point(b));
        for j in 0..n {
            d[(dim + 1, j)] += w * m[j];
        }
    }
    Ok(d)
}

/// Face and cell rules of degree 2, built once per dimension.
fn duality_rules(dim: usize) -> Result<&'static (QuadratureRule, QuadratureRule)> {
    static RULES: OnceLock<[(QuadratureRule, QuadratureRule); 2]> = OnceLock::new();
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedQuadrature(format!(
            "mesh dimension {dim}"
        )));
    }
    let rules = RULES.get_or_init(|| {
        [2, 3].map(|d| {
            let face = quadrature(d, QuadratureKind::Face, 2).expect("degree 2 is supported");
            let cell = quadrature(d, QuadratureKind::Cell, 2).expect("degree 2 is supported");
            (face, cell)
        })
    });
    Ok(&rules[dim - 2])
}

/// Applies the ECR functionals (face means, then cell mean) to `f`.
pub fn ecr_functionals(geom: &ElementGeometry, f: impl Fn(&[f64; 3]) -> f64) -> Result<Vec<f64>> {
    let face_rule = quadrature(geom.dim, QuadratureKind::Face, 6)?;
    let cell_rule = quadrature(geom.dim, QuadratureKind::Cell, 6)?;
    let mut out: Vec<f64> = (0..=geom.dim)
        .map(|i| {
            face_rule
                .iter()
                .map(|(b, w)| w * f(&geom.face_point(i, b)))
                .sum()
        })
        .collect();
    out.push(cell_rule.iter().map(|(b, w)| w * f(&geom.point(b))).sum());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom2(p: [[f64; 2]; 3]) -> ElementGeometry {
        let mut v = [[0.0; 3]; 4];
        for i in 0..3 {
            v[i][..2].copy_from_slice(&p[i]);
        }
        ElementGeometry::from_vertices(2, &v).unwrap()
    }

    fn tet() -> ElementGeometry {
        let v = [
            [0.1, 0.0, -0.2],
            [1.3, 0.2, 0.1],
            [0.2, 0.9, 0.3],
            [0.4, 0.3, 1.1],
        ];
        ElementGeometry::from_vertices(3, &v).unwrap()
    }

    fn face_means(geom: &ElementGeometry, basis: &LocalBasis, j: usize) -> Vec<f64> {
        let rule = quadrature(geom.dim, QuadratureKind::Face, 4).unwrap();
        (0..=geom.dim)
            .map(|i| {
                rule.iter()
                    .map(|(b, w)| {
                        let mut v = [0.0; 5];
                        basis.values(&geom.face_point(i, b), &mut v);
                        w * v[j]
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn p1_is_nodal() {
        let g = tet();
        let basis = p1_basis(&g);
        let mut v = [0.0; 5];
        for j in 0..4 {
            basis.values(&g.vertices[j], &mut v);
            for i in 0..4 {
                assert!((v[i] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
            assert!((v[..4].iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cr_face_means_are_kronecker() {
        for g in [
            geom2([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            geom2([[0.2, -0.1], [1.4, 0.3], [0.5, 0.8]]),
            tet(),
        ] {
            let basis = cr_basis(&g);
            for j in 0..=g.dim {
                for (i, m) in face_means(&g, &basis, j).iter().enumerate() {
                    assert!((m - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
                }
            }
            // sum of CR functions is identically one
            let mut v = [0.0; 5];
            basis.values(&g.point(&[0.1, 0.2, 0.3, 0.4][..=g.dim]), &mut v);
            assert!((v[..=g.dim].iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn cr_value_at_face_barycenter() {
        let g = geom2([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let basis = cr_basis(&g);
        let mut v = [0.0; 5];
        for i in 0..3 {
            basis.values(&g.face_point(i, &[0.5, 0.5]), &mut v);
            assert!((v[i] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ecr_duality_is_identity() {
        for g in [
            geom2([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            geom2([[3.0, 1.0], [3.1, 1.02], [2.97, 1.2]]),
            tet(),
        ] {
            let basis = ecr_basis(&g).unwrap();
            for j in 0..basis.len() {
                let dofs = ecr_functionals(&g, |x| {
                    let mut v = [0.0; 5];
                    basis.values(x, &mut v);
                    v[j]
                })
                .unwrap();
                for (i, d) in dofs.iter().enumerate() {
                    assert!(
                        (d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12,
                        "{i} {j} {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn ecr_reproduces_linear_functions() {
        let g = tet();
        let basis = ecr_basis(&g).unwrap();
        let f = |x: &[f64; 3]| 0.7 - 1.3 * x[0] + 0.4 * x[1] + 2.0 * x[2];
        let dofs = ecr_functionals(&g, f).unwrap();
        for b in [[0.1, 0.2, 0.3, 0.4], [0.25; 4], [0.7, 0.1, 0.1, 0.1]] {
            let x = g.point(&b);
            assert!((basis.eval(&dofs, &x) - f(&x)).abs() < 1e-12);
        }
        // interpolant of a linear function has no bubble component
        let bubble: f64 = basis
            .functions
            .iter()
            .zip(&dofs)
            .map(|(s, c)| s.bubble * c)
            .sum();
        assert!(bubble.abs() < 1e-10);
    }
}
