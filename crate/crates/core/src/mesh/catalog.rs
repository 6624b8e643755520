use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{uniform_refine_with_cap, SimplicialMesh};
use crate::{Error, Result};

pub const DEFAULT_CELL_CAP: usize = 5_000_000;

/// The five benchmark domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Unit square `(0,1)^2`.
    Square,
    /// `(-1,1)^2 \ ((0,1) x (-1,0))`.
    LShape,
    /// Regular hexagon with unit side, centred at the origin.
    Hexagon,
    /// Unit cube `(0,1)^3`.
    Cube,
    /// Fichera corner `[-1,1]^3 \ (-1,0]^3`.
    Fichera,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Square,
        Domain::LShape,
        Domain::Hexagon,
        Domain::Cube,
        Domain::Fichera,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Square => "square",
            Domain::LShape => "lshape",
            Domain::Hexagon => "hexagon",
            Domain::Cube => "cube",
            Domain::Fichera => "fichera",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Domain::Square | Domain::LShape | Domain::Hexagon => 2,
            Domain::Cube | Domain::Fichera => 3,
        }
    }

    pub fn measure(self) -> f64 {
        match self {
            Domain::Square | Domain::Cube => 1.0,
            Domain::LShape => 3.0,
            Domain::Hexagon => 1.5 * 3f64.sqrt(),
            Domain::Fichera => 7.0,
        }
    }

    /// Perimeter (2D) or surface area (3D).
    pub fn boundary_measure(self) -> f64 {
        match self {
            Domain::Square => 4.0,
            Domain::LShape => 8.0,
            Domain::Hexagon | Domain::Cube => 6.0,
            Domain::Fichera => 24.0,
        }
    }

    /// Diameter of the domain itself.
    pub fn diameter(self) -> f64 {
        match self {
            Domain::Square => 2f64.sqrt(),
            Domain::LShape => 2.0 * 2f64.sqrt(),
            Domain::Hexagon => 2.0,
            Domain::Cube => 3f64.sqrt(),
            Domain::Fichera => 2.0 * 3f64.sqrt(),
        }
    }

    fn base_cells(self) -> usize {
        match self {
            Domain::Square => 2,
            Domain::LShape | Domain::Hexagon | Domain::Cube => 6,
            Domain::Fichera => 42,
        }
    }

    /// Cell count after `level` uniform refinements.
    pub fn cell_count(self, level: u32) -> Option<usize> {
        let factor = 1usize.checked_shl(self.dim() as u32 * level)?;
        self.base_cells().checked_mul(factor)
    }

    /// Level-0 mesh.
    pub fn base_mesh(self) -> SimplicialMesh {
        match self {
            Domain::Square => square_grid(&[(0, 0)]),
            Domain::LShape => square_grid(&[(-1, -1), (-1, 0), (0, 0)]),
            Domain::Hexagon => hexagon(),
            Domain::Cube => kuhn_grid(&[(0, 0, 0)]),
            Domain::Fichera => {
                let cubes: Vec<_> = [-1, 0]
                    .iter()
                    .flat_map(|&x| [-1, 0].map(move |y| (x, y)))
                    .flat_map(|(x, y)| [-1, 0].map(move |z| (x, y, z)))
                    .filter(|&c| c != (-1, -1, -1))
                    .collect();
                kuhn_grid(&cubes)
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Domain::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDomain(s.to_string()))
    }
}

/// Cell-count cap, overridable through `STEKLOV_CELL_CAP`.
pub fn cell_cap() -> usize {
    std::env::var("STEKLOV_CELL_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CELL_CAP)
}

/// Base mesh of `domain` refined `level` times.
pub fn generate(domain: Domain, level: u32) -> Result<SimplicialMesh> {
    generate_with_cap(domain, level, cell_cap())
}

pub fn generate_with_cap(domain: Domain, level: u32, cap: usize) -> Result<SimplicialMesh> {
    match domain.cell_count(level) {
        Some(cells) if cells <= cap => {}
        cells => {
            return Err(Error::CellCapExceeded {
                cells: cells.unwrap_or(usize::MAX),
                cap,
            })
        }
    }
    let mut mesh = domain.base_mesh();
    for _ in 0..level {
        mesh = uniform_refine_with_cap(&mesh, cap)?;
    }
    Ok(mesh)
}

/// Unit squares with lower-left corners `origins`, each cut along the
/// diagonal from its lower-left to its upper-right corner.
fn square_grid(origins: &[(i32, i32)]) -> SimplicialMesh {
    let mut ids: HashMap<(i32, i32), usize> = HashMap::new();
    let mut coords = Vec::new();
    let mut cells = Vec::new();
    let mut vid = |p: (i32, i32), coords: &mut Vec<f64>| {
        *ids.entry(p).or_insert_with(|| {
            coords.extend([p.0 as f64, p.1 as f64]);
            coords.len() / 2 - 1
        })
    };
    for &(x, y) in origins {
        let v00 = vid((x, y), &mut coords);
        let v10 = vid((x + 1, y), &mut coords);
        let v11 = vid((x + 1, y + 1), &mut coords);
        let v01 = vid((x, y + 1), &mut coords);
        cells.extend([v00, v10, v11, v00, v11, v01]);
    }
    SimplicialMesh::new(2, coords, cells).expect("catalog mesh is valid")
}

fn hexagon() -> SimplicialMesh {
    let mut coords = vec![0.0, 0.0];
    for k in 0..6 {
        let t = k as f64 * std::f64::consts::PI / 3.0;
        coords.extend([t.cos(), t.sin()]);
    }
    let cells = (0..6).flat_map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect();
    SimplicialMesh::new(2, coords, cells).expect("catalog mesh is valid")
}

/// Unit cubes with minimal corners `origins`, each split into the six Kuhn
/// tetrahedra around its main diagonal. Vertices of every tetrahedron are
/// listed along its monotone lattice path, which uniform refinement relies on.
fn kuhn_grid(origins: &[(i32, i32, i32)]) -> SimplicialMesh {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut ids: HashMap<[i32; 3], usize> = HashMap::new();
    let mut coords = Vec::new();
    let mut cells = Vec::new();
    for &(x, y, z) in origins {
        for perm in PERMS {
            let mut p = [x, y, z];
            let mut tet = [0; 4];
            for (step, slot) in tet.iter_mut().enumerate() {
                if step > 0 {
                    p[perm[step - 1]] += 1;
                }
                *slot = *ids.entry(p).or_insert_with(|| {
                    coords.extend(p.map(f64::from));
                    coords.len() / 3 - 1
                });
            }
            cells.extend(tet);
        }
    }
    SimplicialMesh::new(3, coords, cells).expect("catalog mesh is valid")
}
