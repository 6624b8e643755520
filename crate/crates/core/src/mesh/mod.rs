//! Simplicial meshes of the catalog domains.

mod catalog;
mod geometry;
mod io;
mod refine;

use std::collections::HashMap;

pub use catalog::{cell_cap, generate, generate_with_cap, Domain, DEFAULT_CELL_CAP};
pub use geometry::ElementGeometry;
pub use io::{export_mesh, import_mesh, read_mesh, write_mesh};
pub use refine::{uniform_refine, uniform_refine_with_cap};

use crate::{Error, Result};

/// Triangulation of a polygonal (2D) or polyhedral (3D) domain.
///
/// Faces are the `dim - 1` dimensional sub-simplices. They are derived from
/// the cells on construction and numbered by first appearance in cell order.
/// Local face `i` of a cell is the one opposite local vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMesh {
    dim: usize,
    coords: Vec<f64>,
    cells: Vec<usize>,
    faces: Vec<usize>,
    cell_faces: Vec<usize>,
    face_cells: Vec<[usize; 2]>,
    boundary: Vec<bool>,
}

/// Marker for a missing neighbour in [`SimplicialMesh::face_cells`].
pub const NO_CELL: usize = usize::MAX;

impl SimplicialMesh {
    /// Builds a mesh from flat coordinate and connectivity arrays.
    ///
    /// `coords` holds `dim` values per vertex and `cells` holds `dim + 1`
    /// vertex indices per cell.
    pub fn new(dim: usize, coords: Vec<f64>, cells: Vec<usize>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidMesh(format!("dimension {dim} not supported")));
        }
        if coords.len() % dim != 0 || cells.len() % (dim + 1) != 0 {
            return Err(Error::InvalidMesh(
                "array lengths do not match dimension".into(),
            ));
        }
        if cells.is_empty() {
            return Err(Error::InvalidMesh("mesh has no cells".into()));
        }
        let n_vertices = coords.len() / dim;
        if let Some(&v) = cells.iter().find(|&&v| v >= n_vertices) {
            return Err(Error::InvalidMesh(format!("vertex index {v} out of range")));
        }
        let nv = dim + 1;
        let n_cells = cells.len() / nv;

        let mut lookup: HashMap<[usize; 3], usize> = HashMap::with_capacity(n_cells * nv / 2 + 16);
        let mut faces = Vec::with_capacity(n_cells * nv / 2 * dim);
        let mut face_cells: Vec<[usize; 2]> = Vec::with_capacity(n_cells * nv / 2);
        let mut cell_faces = Vec::with_capacity(n_cells * nv);
        for c in 0..n_cells {
            let cell = &cells[c * nv..(c + 1) * nv];
            for i in 0..nv {
                let key = face_key(cell, i);
                let next = face_cells.len();
                let f = *lookup.entry(key).or_insert(next);
                if f == next {
                    faces.extend_from_slice(&key[..dim]);
                    face_cells.push([c, NO_CELL]);
                } else if face_cells[f][1] == NO_CELL && face_cells[f][0] != c {
                    face_cells[f][1] = c;
                } else {
                    return Err(Error::InvalidMesh(format!(
                        "face {:?} shared by more than two cells",
                        &key[..dim]
                    )));
                }
                cell_faces.push(f);
            }
        }
        let boundary = face_cells.iter().map(|fc| fc[1] == NO_CELL).collect();
        let mesh = Self {
            dim,
            coords,
            cells,
            faces,
            cell_faces,
            face_cells,
            boundary,
        };
        for c in 0..mesh.n_cells() {
            let measure = mesh.cell_measure(c);
            if !(measure > 0.0) {
                return Err(Error::DegenerateCell { cell: c, measure });
            }
        }
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    pub fn n_faces(&self) -> usize {
        self.face_cells.len()
    }

    pub fn vertex(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    /// Vertex coordinates padded with zeros to three components.
    pub fn point(&self, v: usize) -> [f64; 3] {
        let mut p = [0.0; 3];
        p[..self.dim].copy_from_slice(self.vertex(v));
        p
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        let nv = self.dim + 1;
        &self.cells[c * nv..(c + 1) * nv]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Sorted vertex indices of a face.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f * self.dim..(f + 1) * self.dim]
    }

    /// Faces of a cell; entry `i` is opposite local vertex `i`.
    pub fn cell_faces(&self, c: usize) -> &[usize] {
        let nv = self.dim + 1;
        &self.cell_faces[c * nv..(c + 1) * nv]
    }

    /// Cells adjacent to a face; the second entry is [`NO_CELL`] on the boundary.
    pub fn face_cells(&self, f: usize) -> [usize; 2] {
        self.face_cells[f]
    }

    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.boundary[f]
    }

    pub fn boundary_face_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn n_boundary_faces(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Vertices lying on a boundary face, sorted.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        let mut on = vec![false; self.n_vertices()];
        for f in (0..self.n_faces()).filter(|&f| self.boundary[f]) {
            for &v in self.face(f) {
                on[v] = true;
            }
        }
        (0..on.len()).filter(|&v| on[v]).collect()
    }

    /// Number of edges (one-dimensional sub-simplices).
    pub fn n_edges(&self) -> usize {
        if self.dim == 2 {
            return self.n_faces();
        }
        let mut edges = std::collections::HashSet::new();
        for c in 0..self.n_cells() {
            let cell = self.cell(c);
            for i in 0..cell.len() {
                for j in i + 1..cell.len() {
                    edges.insert((cell[i].min(cell[j]), cell[i].max(cell[j])));
                }
            }
        }
        edges.len()
    }

    pub fn cell_vertices(&self, c: usize) -> [[f64; 3]; 4] {
        let mut out = [[0.0; 3]; 4];
        for (slot, &v) in out.iter_mut().zip(self.cell(c)) {
            *slot = self.point(v);
        }
        out
    }

    /// Unsigned measure (area or volume) of a cell.
    pub fn cell_measure(&self, c: usize) -> f64 {
        let p = self.cell_vertices(c);
        geometry::simplex_measure(self.dim, &p)
    }

    pub fn element_geometry(&self, c: usize) -> Result<ElementGeometry> {
        ElementGeometry::new(self, c)
    }

    /// Measure (length or area) of a face.
    pub fn face_measure(&self, f: usize) -> f64 {
        let mut p = [[0.0; 3]; 3];
        for (slot, &v) in p.iter_mut().zip(self.face(f)) {
            *slot = self.point(v);
        }
        geometry::face_measure(self.dim, &p)
    }

    /// Sum of the cell measures.
    pub fn total_measure(&self) -> f64 {
        (0..self.n_cells()).map(|c| self.cell_measure(c)).sum()
    }

    /// Sum of the boundary face measures.
    pub fn boundary_measure(&self) -> f64 {
        (0..self.n_faces())
            .filter(|&f| self.boundary[f])
            .map(|f| self.face_measure(f))
            .sum()
    }

    /// Maximum element diameter `h`.
    pub fn diameter(&self) -> f64 {
        (0..self.n_cells())
            .map(|c| geometry::simplex_diameter(self.dim, &self.cell_vertices(c)))
            .fold(0.0, f64::max)
    }

    /// Minimum over cells of inradius / diameter.
    pub fn min_shape_ratio(&self) -> f64 {
        (0..self.n_cells())
            .map(|c| {
                let p = self.cell_vertices(c);
                let faces: f64 = (0..=self.dim)
                    .map(|i| geometry::face_measure(self.dim, &opposite(&p, self.dim, i)))
                    .sum();
                let inradius = self.dim as f64 * geometry::simplex_measure(self.dim, &p) / faces;
                inradius / geometry::simplex_diameter(self.dim, &p)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Axis-aligned bounding box as `(min, max)` per coordinate.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|k| {
                self.coords
                    .iter()
                    .skip(k)
                    .step_by(self.dim)
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                        (lo.min(x), hi.max(x))
                    })
            })
            .collect()
    }
}

/// Mesh diameter `h = max h_K`.
pub fn mesh_diameter(mesh: &SimplicialMesh) -> f64 {
    mesh.diameter()
}

fn face_key(cell: &[usize], skip: usize) -> [usize; 3] {
    let mut key = [usize::MAX; 3];
    let mut n = 0;
    for (i, &v) in cell.iter().enumerate() {
        if i != skip {
            key[n] = v;
            n += 1;
        }
    }
    key[..n].sort_unstable();
    key
}

/// Vertices of the face opposite local vertex `i`.
pub(crate) fn opposite(p: &[[f64; 3]; 4], dim: usize, i: usize) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    let mut n = 0;
    for (j, q) in p.iter().enumerate().take(dim + 1) {
        if j != i {
            out[n] = *q;
            n += 1;
        }
    }
    out
}
