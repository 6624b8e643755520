//! Global DOF numbering and assembly of the pencil `(A, B)`.
//!
//! `A` collects `sum_K int_K (alpha grad u . grad v + beta u v)` and `B` the
//! boundary form `int_{dOmega} u v ds`. No boundary conditions are imposed;
//! the boundary only enters through `B`.

mod dofmap;
mod sparse;

pub use dofmap::{build_dofmap, DofMap};
pub use sparse::CsrMatrix;

use crate::fem::{
    local_boundary_mass, local_matrices, quadrature, CoefficientField, ElementKind, QuadratureKind,
};
use crate::mesh::{Domain, ElementGeometry, SimplicialMesh};
use crate::{Error, Result};

/// What a pencil was assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDescriptor {
    pub element: ElementKind,
    pub alpha: String,
    pub beta: String,
    pub alpha0: f64,
    pub quad_degree: usize,
    pub domain: Option<Domain>,
    pub level: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct PencilSystem {
    pub a: CsrMatrix,
    pub b: CsrMatrix,
    pub dofmap: DofMap,
    pub descriptor: ProblemDescriptor,
}

impl PencilSystem {
    pub fn n_dofs(&self) -> usize {
        self.a.n()
    }

    /// Tags the system with its catalog origin (used to seed the eigensolver).
    pub fn with_origin(mut self, domain: Domain, level: u32) -> Self {
        self.descriptor.domain = Some(domain);
        self.descriptor.level = Some(level);
        self
    }
}

pub fn assemble(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    alpha: &CoefficientField,
    beta: &CoefficientField,
    quad_degree: usize,
) -> Result<PencilSystem> {
    let dim = mesh.dim();
    let cell_rule = quadrature(dim, QuadratureKind::Cell, quad_degree)?;
    let face_rule = quadrature(dim, QuadratureKind::Face, quad_degree)?;
    let n_loc = dofmap.n_local;
    let upper_per_cell = n_loc * (n_loc + 1) / 2;
    let mut a_trip = Vec::with_capacity(mesh.n_cells() * upper_per_cell);
    let mut b_trip = Vec::with_capacity(mesh.n_boundary_faces() * upper_per_cell);

    for c in 0..mesh.n_cells() {
        let geom = ElementGeometry::new(mesh, c)?;
        let basis = dofmap.kind.basis(&geom)?;
        let lm =
            local_matrices(&geom, &basis, alpha, beta, &cell_rule).map_err(|e| with_cell(e, c))?;
        let dofs = dofmap.cell_dofs(c);
        scatter_upper(&mut a_trip, dofs, |i, j| lm.stiffness[i][j] + lm.mass[i][j]);

        for (local, &f) in mesh.cell_faces(c).iter().enumerate() {
            if mesh.is_boundary_face(f) {
                let bm = local_boundary_mass(&geom, &basis, local, &face_rule);
                // the P1 hat of the opposite vertex vanishes on the face
                let off = |i: usize| dofmap.kind == ElementKind::P1 && i == local;
                scatter_upper(&mut b_trip, dofs, |i, j| {
                    if off(i) || off(j) {
                        0.0
                    } else {
                        bm[i][j]
                    }
                });
            }
        }
    }

    let n = dofmap.n_dofs;
    Ok(PencilSystem {
        a: CsrMatrix::from_upper_triplets(n, a_trip),
        b: CsrMatrix::from_upper_triplets(n, b_trip),
        dofmap: dofmap.clone(),
        descriptor: ProblemDescriptor {
            element: dofmap.kind,
            alpha: alpha.descriptor(),
            beta: beta.descriptor(),
            alpha0: alpha.lower_bound,
            quad_degree,
            domain: None,
            level: None,
        },
    })
}

/// Generates the catalog mesh and assembles on it.
pub fn assemble_catalog(
    domain: Domain,
    level: u32,
    kind: ElementKind,
    alpha: &CoefficientField,
    beta: &CoefficientField,
    quad_degree: usize,
) -> Result<(SimplicialMesh, PencilSystem)> {
    let mesh = crate::mesh::generate(domain, level)?;
    let dofmap = build_dofmap(&mesh, kind);
    let system = assemble(&mesh, &dofmap, alpha, beta, quad_degree)?.with_origin(domain, level);
    Ok((mesh, system))
}

/// Boundary mass of a single local face, checking that it is on `dOmega`.
pub fn boundary_face_mass(
    mesh: &SimplicialMesh,
    kind: ElementKind,
    cell: usize,
    local_face: usize,
    quad_degree: usize,
) -> Result<crate::fem::LocalMatrix> {
    let f = mesh.cell_faces(cell)[local_face];
    if !mesh.is_boundary_face(f) {
        return Err(Error::FaceNotOnBoundary {
            cell,
            face: local_face,
        });
    }
    let geom = ElementGeometry::new(mesh, cell)?;
    let rule = quadrature(mesh.dim(), QuadratureKind::Face, quad_degree)?;
    Ok(local_boundary_mass(
        &geom,
        &kind.basis(&geom)?,
        local_face,
        &rule,
    ))
}

fn scatter_upper(
    out: &mut Vec<(usize, usize, f64)>,
    dofs: &[usize],
    local: impl Fn(usize, usize) -> f64,
) {
    for (i, &gi) in dofs.iter().enumerate() {
        for (j, &gj) in dofs.iter().enumerate() {
            if gi < gj || (gi == gj && i <= j) {
                out.push((gi, gj, local(i, j)));
            }
        }
    }
}

fn with_cell(e: Error, cell: usize) -> Error {
    match e {
        Error::CoefficientBelowBound {
            name, value, bound, ..
        } => Error::CoefficientBelowBound {
            name,
            cell,
            value,
            bound,
        },
        other => other,
    }
}
