use std::collections::HashMap;

use super::{cell_cap, SimplicialMesh};
use crate::{Error, Result};

/// One level of uniform refinement.
///
/// Triangles are red-refined into four similar children. Tetrahedra are
/// split into eight by Bey's rule, which maps a Kuhn tetrahedron whose
/// vertices follow its lattice path onto the Kuhn tetrahedra of the halved
/// lattice; refining a catalog mesh therefore reproduces the next level.
pub fn uniform_refine(mesh: &SimplicialMesh) -> Result<SimplicialMesh> {
    uniform_refine_with_cap(mesh, cell_cap())
}

pub fn uniform_refine_with_cap(mesh: &SimplicialMesh, cap: usize) -> Result<SimplicialMesh> {
    let cells = mesh.n_cells() << mesh.dim();
    if cells > cap {
        return Err(Error::CellCapExceeded { cells, cap });
    }
    match mesh.dim() {
        2 => red_refine(mesh),
        _ => bey_refine(mesh),
    }
}

fn red_refine(mesh: &SimplicialMesh) -> Result<SimplicialMesh> {
    let nv = mesh.n_vertices();
    let mut coords = mesh.coords().to_vec();
    coords.reserve(2 * mesh.n_faces());
    for f in 0..mesh.n_faces() {
        let e = mesh.face(f);
        let (a, b) = (mesh.vertex(e[0]), mesh.vertex(e[1]));
        coords.extend([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
    }
    let mut cells = Vec::with_capacity(12 * mesh.n_cells());
    for c in 0..mesh.n_cells() {
        let &[a, b, cc] = mesh.cell(c) else {
            unreachable!()
        };
        let cf = mesh.cell_faces(c);
        let (mbc, mca, mab) = (nv + cf[0], nv + cf[1], nv + cf[2]);
        cells.extend([a, mab, mca, mab, b, mbc, mca, mbc, cc, mbc, mca, mab]);
    }
    SimplicialMesh::new(2, coords, cells)
}

fn bey_refine(mesh: &SimplicialMesh) -> Result<SimplicialMesh> {
    let mut coords = mesh.coords().to_vec();
    let mut mids: HashMap<(usize, usize), usize> = HashMap::with_capacity(2 * mesh.n_cells());
    let mut mid = |a: usize, b: usize, coords: &mut Vec<f64>| -> usize {
        let key = (a.min(b), a.max(b));
        *mids.entry(key).or_insert_with(|| {
            for k in 0..3 {
                let m = 0.5 * (coords[3 * a + k] + coords[3 * b + k]);
                coords.push(m);
            }
            coords.len() / 3 - 1
        })
    };
    let mut cells = Vec::with_capacity(32 * mesh.n_cells());
    for c in 0..mesh.n_cells() {
        let &[x0, x1, x2, x3] = mesh.cell(c) else {
            unreachable!()
        };
        let x01 = mid(x0, x1, &mut coords);
        let x02 = mid(x0, x2, &mut coords);
        let x03 = mid(x0, x3, &mut coords);
        let x12 = mid(x1, x2, &mut coords);
        let x13 = mid(x1, x3, &mut coords);
        let x23 = mid(x2, x3, &mut coords);
        cells.extend([
            x0, x01, x02, x03, //
            x01, x1, x12, x13, //
            x02, x12, x2, x23, //
            x03, x13, x23, x3, //
            x01, x02, x03, x13, //
            x01, x02, x12, x13, //
            x02, x03, x13, x23, //
            x02, x12, x13, x23,
        ]);
    }
    SimplicialMesh::new(3, coords, cells)
}
