use super::{opposite, SimplicialMesh};
use crate::{Error, Result};

/// Constant geometric data of one simplex.
///
/// Arrays are sized for tetrahedra; only the first `dim + 1` entries (and
/// the first `dim` vector components) are meaningful for triangles. Local
/// face `i` is opposite local vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub dim: usize,
    pub vertices: [[f64; 3]; 4],
    /// Area or volume `|K|`.
    pub measure: f64,
    /// Longest edge `h_K`.
    pub diameter: f64,
    /// `H_K = d |K| / |e|` for each local face.
    pub heights: [f64; 4],
    pub face_measures: [f64; 4],
    /// Constant gradients of the barycentric coordinates.
    pub barycentric_gradients: [[f64; 3]; 4],
    pub centroid: [f64; 3],
}

impl ElementGeometry {
    pub fn new(mesh: &SimplicialMesh, cell: usize) -> Result<Self> {
        Self::from_vertices(mesh.dim(), &mesh.cell_vertices(cell)).map_err(|e| match e {
            Error::DegenerateCell { measure, .. } => Error::DegenerateCell { cell, measure },
            other => other,
        })
    }

    pub fn from_vertices(dim: usize, vertices: &[[f64; 3]; 4]) -> Result<Self> {
        let n = dim + 1;
        let mut jac = [[0.0; 3]; 3];
        for (col, v) in vertices[1..n].iter().enumerate() {
            for k in 0..dim {
                jac[k][col] = v[k] - vertices[0][k];
            }
        }
        let det = determinant(dim, &jac);
        let measure = det.abs() / factorial(dim);
        let diameter = simplex_diameter(dim, vertices);
        if !(measure > 1e-14 * diameter.powi(dim as i32)) {
            return Err(Error::DegenerateCell {
                cell: usize::MAX,
                measure,
            });
        }

        // Rows of J^{-1} are the gradients of lambda_1..lambda_d.
        let inv = inverse(dim, &jac, det);
        let mut grads = [[0.0; 3]; 4];
        for i in 1..n {
            grads[i][..dim].copy_from_slice(&inv[i - 1][..dim]);
            for k in 0..dim {
                grads[0][k] -= inv[i - 1][k];
            }
        }

        let mut face_measures = [0.0; 4];
        let mut heights = [0.0; 4];
        for i in 0..n {
            face_measures[i] = face_measure(dim, &opposite(vertices, dim, i));
            heights[i] = dim as f64 * measure / face_measures[i];
        }
        let mut centroid = [0.0; 3];
        for v in &vertices[..n] {
            for k in 0..dim {
                centroid[k] += v[k] / n as f64;
            }
        }
        Ok(Self {
            dim,
            vertices: *vertices,
            measure,
            diameter,
            heights,
            face_measures,
            barycentric_gradients: grads,
            centroid,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.dim + 1
    }

    /// Maps barycentric coordinates to a physical point.
    pub fn point(&self, bary: &[f64]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for (b, v) in bary.iter().zip(&self.vertices[..=self.dim]) {
            for k in 0..3 {
                x[k] += b * v[k];
            }
        }
        x
    }

    /// Maps barycentric coordinates of face `face` to a physical point.
    ///
    /// The face vertices are the cell vertices other than `face`, in order.
    pub fn face_point(&self, face: usize, bary: &[f64]) -> [f64; 3] {
        let verts = opposite(&self.vertices, self.dim, face);
        let mut x = [0.0; 3];
        for (b, v) in bary.iter().zip(&verts[..self.dim]) {
            for k in 0..3 {
                x[k] += b * v[k];
            }
        }
        x
    }

    /// Inradius `d |K| / sum |e|`.
    pub fn inradius(&self) -> f64 {
        let total: f64 = self.face_measures[..=self.dim].iter().sum();
        self.dim as f64 * self.measure / total
    }
}

fn factorial(d: usize) -> f64 {
    (1..=d).product::<usize>() as f64
}

fn determinant(dim: usize, m: &[[f64; 3]; 3]) -> f64 {
    match dim {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

fn inverse(dim: usize, m: &[[f64; 3]; 3], det: f64) -> [[f64; 3]; 3] {
    let mut inv = [[0.0; 3]; 3];
    if dim == 2 {
        inv[0][0] = m[1][1] / det;
        inv[0][1] = -m[0][1] / det;
        inv[1][0] = -m[1][0] / det;
        inv[1][1] = m[0][0] / det;
        return inv;
    }
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of m[j][i]
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / det;
        }
    }
    inv
}

pub(crate) fn simplex_measure(dim: usize, p: &[[f64; 3]; 4]) -> f64 {
    let mut jac = [[0.0; 3]; 3];
    for col in 0..dim {
        for k in 0..dim {
            jac[k][col] = p[col + 1][k] - p[0][k];
        }
    }
    determinant(dim, &jac).abs() / factorial(dim)
}

pub(crate) fn simplex_diameter(dim: usize, p: &[[f64; 3]; 4]) -> f64 {
    let mut h2: f64 = 0.0;
    for i in 0..=dim {
        for j in i + 1..=dim {
            h2 = h2.max(dist2(&p[i], &p[j]));
        }
    }
    h2.sqrt()
}

/// Measure of the `dim - 1` simplex spanned by the first `dim` points.
pub(crate) fn face_measure(dim: usize, p: &[[f64; 3]; 3]) -> f64 {
    if dim == 2 {
        return dist2(&p[0], &p[1]).sqrt();
    }
    let u = sub(&p[1], &p[0]);
    let v = sub(&p[2], &p[0]);
    let c = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = sub(a, b);
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}
