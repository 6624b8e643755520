use std::collections::{BTreeSet, HashMap};

use steklov_core::mesh::{generate, read_mesh, uniform_refine, write_mesh, Domain, SimplicialMesh};

fn levels(domain: Domain) -> std::ops::RangeInclusive<u32> {
    if domain.dim() == 2 {
        0..=5
    } else {
        0..=3
    }
}

#[test]
fn measures_and_boundary_tile_the_domain() {
    for domain in Domain::ALL {
        for level in levels(domain) {
            let m = generate(domain, level).unwrap();
            let vol = m.total_measure();
            assert!(
                (vol - domain.measure()).abs() <= 1e-12 * domain.measure(),
                "{domain} {level}"
            );
            let cells: f64 = (0..m.n_cells()).map(|c| m.cell_measure(c)).sum();
            assert!((cells - vol).abs() <= 1e-12 * vol);
            let bnd = m.boundary_measure();
            assert!(
                (bnd - domain.boundary_measure()).abs() <= 1e-12 * bnd,
                "{domain} {level}"
            );
        }
    }
    let perimeters = [4.0, 8.0, 6.0, 6.0, 24.0];
    for (domain, p) in Domain::ALL.into_iter().zip(perimeters) {
        assert_eq!(domain.boundary_measure(), p);
    }
}

#[test]
fn faces_are_shared_by_one_or_two_cells() {
    for domain in Domain::ALL {
        let m = generate(domain, 2).unwrap();
        let mut count = vec![0usize; m.n_faces()];
        for c in 0..m.n_cells() {
            for &f in m.cell_faces(c) {
                count[f] += 1;
            }
        }
        for f in 0..m.n_faces() {
            let expected = if m.is_boundary_face(f) { 1 } else { 2 };
            assert_eq!(count[f], expected, "{domain} face {f}");
        }
        let d = m.dim() as isize;
        // every cell has d + 1 faces; interior ones are counted twice
        let total = (d + 1) * m.n_cells() as isize;
        assert_eq!(
            2 * m.n_faces() as isize - m.n_boundary_faces() as isize,
            total
        );
    }
}

#[test]
fn diameter_halves_and_shape_ratio_is_level_independent() {
    for domain in Domain::ALL {
        let mut prev: Option<(f64, f64)> = None;
        for level in levels(domain) {
            let m = generate(domain, level).unwrap();
            let h = m.diameter();
            let ratio = m.min_shape_ratio();
            if let Some((ph, pr)) = prev {
                // exact on lattice domains; the hexagon carries sqrt(3) rounding
                assert!(
                    (h - ph / 2.0).abs() <= 1e-14 * h,
                    "{domain} {level}: {h} vs {ph}"
                );
                if domain != Domain::Hexagon {
                    assert_eq!(h, ph / 2.0, "{domain} {level}");
                }
                assert!((ratio - pr).abs() <= 1e-10 * pr, "{domain} {level}");
            }
            prev = Some((h, ratio));
        }
    }
}

#[test]
fn refinement_of_a_level_reproduces_the_next() {
    for domain in Domain::ALL {
        let coarse = generate(domain, 1).unwrap();
        let fine = generate(domain, 2).unwrap();
        assert_eq!(
            cell_set(&uniform_refine(&coarse).unwrap(), 1e9),
            cell_set(&fine, 1e9),
            "{domain}"
        );
    }
}

/// Kuhn split of every lattice cube of width `1/n` in the given list of
/// unit cubes.
fn freudenthal(unit_cubes: &[[i64; 3]], n: i64) -> BTreeSet<Vec<[i64; 3]>> {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = BTreeSet::new();
    for u in unit_cubes {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let corner = [u[0] * n + i, u[1] * n + j, u[2] * n + k];
                    for p in perms {
                        let mut v = corner;
                        let mut cell = vec![v];
                        for axis in p {
                            v[axis] += 1;
                            cell.push(v);
                        }
                        cell.sort();
                        out.insert(cell);
                    }
                }
            }
        }
    }
    out
}

fn cell_set(m: &SimplicialMesh, scale: f64) -> BTreeSet<Vec<[i64; 3]>> {
    (0..m.n_cells())
        .map(|c| {
            let mut cell: Vec<[i64; 3]> = m
                .cell(c)
                .iter()
                .map(|&v| {
                    let p = m.point(v);
                    let r = |x: f64| {
                        let s = x * scale;
                        assert!(scale > 1e6 || (s - s.round()).abs() < 1e-9);
                        s.round() as i64
                    };
                    [r(p[0]), r(p[1]), r(p[2])]
                })
                .collect();
            cell.sort();
            cell
        })
        .collect()
}

#[test]
fn refined_3d_meshes_are_freudenthal_grids() {
    let fichera: Vec<[i64; 3]> = (0..8)
        .map(|b| [-(b & 1), -((b >> 1) & 1), -((b >> 2) & 1)])
        .filter(|c| *c != [-1, -1, -1])
        .collect();
    for level in 0..=3 {
        let n = 1i64 << level;
        let cube = generate(Domain::Cube, level).unwrap();
        assert_eq!(
            cell_set(&cube, n as f64),
            freudenthal(&[[0, 0, 0]], n),
            "cube {level}"
        );
        let f = generate(Domain::Fichera, level).unwrap();
        assert_eq!(
            cell_set(&f, n as f64),
            freudenthal(&fichera, n),
            "fichera {level}"
        );
    }
}

#[test]
fn ascii_round_trip_on_every_domain() {
    for domain in Domain::ALL {
        let m = generate(domain, 1).unwrap();
        let mut buf = Vec::new();
        write_mesh(&m, &mut buf).unwrap();
        let back = read_mesh(&buf[..]).unwrap();
        assert_eq!(back.coords(), m.coords());
        assert_eq!(back.cells(), m.cells());
        assert_eq!(back.boundary_face_flags(), m.boundary_face_flags());
    }
}

#[test]
fn vertices_are_unique() {
    for domain in Domain::ALL {
        let m = generate(domain, 2).unwrap();
        let mut seen = HashMap::new();
        for v in 0..m.n_vertices() {
            let key: Vec<i64> = m
                .vertex(v)
                .iter()
                .map(|x| (x * 1e9).round() as i64)
                .collect();
            assert!(
                seen.insert(key, v).is_none(),
                "{domain} duplicate vertex {v}"
            );
        }
    }
}
