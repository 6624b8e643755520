use crate::fem::ElementKind;
use crate::mesh::SimplicialMesh;

/// Global numbering of the degrees of freedom.
///
/// CR: one DOF per face, in mesh face order. ECR: the CR DOFs followed by one
/// DOF per cell. P1: one DOF per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    pub kind: ElementKind,
    pub n_dofs: usize,
    pub n_local: usize,
    cell_dofs: Vec<usize>,
    /// Sorted DOFs whose basis functions may have a nonzero trace on the boundary.
    pub boundary_dofs: Vec<usize>,
}

impl DofMap {
    /// Global DOFs of a cell, in local shape-function order.
    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        &self.cell_dofs[c * self.n_local..(c + 1) * self.n_local]
    }

    pub fn n_cells(&self) -> usize {
        self.cell_dofs.len() / self.n_local
    }
}

pub fn build_dofmap(mesh: &SimplicialMesh, kind: ElementKind) -> DofMap {
    let dim = mesh.dim();
    let n_local = kind.n_local(dim);
    let n_cells = mesh.n_cells();
    let mut cell_dofs = Vec::with_capacity(n_cells * n_local);
    let n_dofs = match kind {
        ElementKind::Cr => {
            for c in 0..n_cells {
                cell_dofs.extend_from_slice(mesh.cell_faces(c));
            }
            mesh.n_faces()
        }
        ElementKind::Ecr => {
            for c in 0..n_cells {
                cell_dofs.extend_from_slice(mesh.cell_faces(c));
                cell_dofs.push(mesh.n_faces() + c);
            }
            mesh.n_faces() + n_cells
        }
        ElementKind::P1 => {
            cell_dofs.extend_from_slice(mesh.cells());
            mesh.n_vertices()
        }
    };

    let boundary_dofs = match kind {
        ElementKind::P1 => mesh.boundary_vertices(),
        _ => {
            let mut on = vec![false; n_dofs];
            for c in 0..n_cells {
                if mesh.cell_faces(c).iter().any(|&f| mesh.is_boundary_face(f)) {
                    for &d in &cell_dofs[c * n_local..(c + 1) * n_local] {
                        on[d] = true;
                    }
                }
            }
            (0..n_dofs).filter(|&d| on[d]).collect()
        }
    };

    DofMap {
        kind,
        n_dofs,
        n_local,
        cell_dofs,
        boundary_dofs,
    }
}
