//! Helpers shared by the integration tests: an independent tensor-product
//! Gauss-Legendre integrator on simplices and random samplers.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use steklov_core::assembly::build_dofmap;
use steklov_core::fem::{CoefficientField, ElementKind};
use steklov_core::mesh::{ElementGeometry, SimplicialMesh};

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// `int_S f` over the simplex with the given `d + 1` vertices (`d` = 1, 2
/// or 3, embedded in 3D), by collapsed Gauss-Legendre with `n` points per
/// direction.
pub fn simplex_integral(vertices: &[[f64; 3]], n: usize, f: impl Fn(&[f64; 3]) -> f64) -> f64 {
    let d = vertices.len() - 1;
    let gl = gauss_legendre(n);
    let edge = |k: usize| -> [f64; 3] {
        let mut e = [0.0; 3];
        for c in 0..3 {
            e[c] = vertices[k + 1][c] - vertices[0][c];
        }
        e
    };
    let edges: Vec<[f64; 3]> = (0..d).map(edge).collect();
    let measure = simplex_measure(&edges);
    let at = |r: &[f64]| -> [f64; 3] {
        let mut x = vertices[0];
        for (e, &t) in edges.iter().zip(r) {
            for c in 0..3 {
                x[c] += t * e[c];
            }
        }
        x
    };
    // reference simplex has measure 1/d!, hence the factorial below
    let fact = [1.0, 1.0, 2.0, 6.0][d];
    let mut sum = 0.0;
    match d {
        1 => {
            for &(s, ws) in &gl {
                sum += ws * f(&at(&[s]));
            }
        }
        2 => {
            for &(s, ws) in &gl {
                for &(t, wt) in &gl {
                    sum += ws * wt * (1.0 - s) * f(&at(&[s, t * (1.0 - s)]));
                }
            }
        }
        3 => {
            for &(s, ws) in &gl {
                for &(t, wt) in &gl {
                    for &(r, wr) in &gl {
                        let jac = (1.0 - s) * (1.0 - s) * (1.0 - t);
                        let p = [s, t * (1.0 - s), r * (1.0 - s) * (1.0 - t)];
                        sum += ws * wt * wr * jac * f(&at(&p));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    sum * measure * fact
}

fn simplex_measure(edges: &[[f64; 3]]) -> f64 {
    let cross = |a: &[f64; 3], b: &[f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let len = |a: &[f64; 3]| (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    match edges.len() {
        1 => len(&edges[0]),
        2 => 0.5 * len(&cross(&edges[0], &edges[1])),
        _ => {
            let c = cross(&edges[0], &edges[1]);
            (c[0] * edges[2][0] + c[1] * edges[2][1] + c[2] * edges[2][2]).abs() / 6.0
        }
    }
}

/// Polynomial of total degree at most `degree` in `dim` variables.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub dim: usize,
    pub terms: Vec<([u32; 3], f64)>,
}

impl Polynomial {
    pub fn random(rng: &mut impl Rng, dim: usize, degree: u32) -> Self {
        let mut terms = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                let ks: Vec<u32> = if dim == 3 {
                    (0..=degree - i - j).collect()
                } else {
                    vec![0]
                };
                for k in ks {
                    terms.push(([i, j, k], rng.random_range(-1.0..1.0)));
                }
            }
        }
        Self { dim, terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * (0..self.dim)
                    .map(|k| x[k].powi(e[k] as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn gradient(&self, x: &[f64]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (e, c) in &self.terms {
            for (k, gk) in g.iter_mut().enumerate().take(self.dim) {
                if e[k] == 0 {
                    continue;
                }
                let mut t = c * e[k] as f64;
                for m in 0..self.dim {
                    let p = if m == k { e[m] - 1 } else { e[m] };
                    t *= x[m].powi(p as i32);
                }
                *gk += t;
            }
        }
        g
    }
}

/// Nondegenerate simplex with vertices in a box of random size around a
/// random center.
pub fn random_element(rng: &mut impl Rng, dim: usize) -> ElementGeometry {
    loop {
        let scale = 10f64.powf(rng.random_range(-2.0..0.5));
        let center: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut v = [[0.0; 3]; 4];
        for p in v.iter_mut().take(dim + 1) {
            for k in 0..dim {
                p[k] = center[k] + scale * rng.random_range(-1.0..1.0);
            }
        }
        if let Ok(g) = ElementGeometry::from_vertices(dim, &v) {
            if g.inradius() / g.diameter > 0.02 {
                return g;
            }
        }
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Worst ratios observed on one random (element, polynomial) sample.
#[derive(Debug, Clone, Copy, Default)]
pub struct InterpolationSample {
    pub degree: u32,
    /// `|int_K grad(u - I_h u) . grad eta_i| / (|u|_1 |eta_i|_1)`, max over `i`.
    pub orthogonality: f64,
    /// `||u - I_h u||_0 / (C_h |u - I_h u|_1)`.
    pub poincare: f64,
    /// `||u - I_h u||_{0,e} / (C_e |u - I_h u|_1)`, max over faces.
    pub trace: f64,
}

struct LocalPolynomial<F> {
    p: Polynomial,
    local: F,
    h: f64,
}

impl<F: Fn(&[f64]) -> [f64; 3]> LocalPolynomial<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.p.eval(&(self.local)(x))
    }

    fn gradient(&self, x: &[f64]) -> [f64; 3] {
        let g = self.p.gradient(&(self.local)(x));
        [g[0] / self.h, g[1] / self.h, g[2] / self.h]
    }
}

pub fn interpolation_sample(rng: &mut impl Rng, dim: usize) -> InterpolationSample {
    use steklov_core::fem::{
        cr_basis, cr_interpolate, interp_constant_poincare, interp_constant_trace,
    };
    use steklov_core::mesh::SimplicialMesh;

    let g0 = random_element(rng, dim);
    let coords: Vec<f64> = g0.vertices[..=dim]
        .iter()
        .flat_map(|p| p[..dim].to_vec())
        .collect();
    let mesh = SimplicialMesh::new(dim, coords, (0..=dim).collect()).unwrap();
    let geom = ElementGeometry::new(&mesh, 0).unwrap();
    let degree = rng.random_range(1..=4);
    // polynomial in coordinates local to the element, scaled by its diameter
    let p = Polynomial::random(rng, dim, degree);
    let (c, h) = (geom.centroid, geom.diameter);
    let local = move |x: &[f64]| -> [f64; 3] {
        let mut y = [0.0; 3];
        for k in 0..dim {
            y[k] = (x[k] - c[k]) / h;
        }
        y
    };
    let u = LocalPolynomial { p, local, h };
    let basis = cr_basis(&geom);
    let dofs = cr_interpolate(&mesh, |x| u.eval(x), 4).unwrap();
    let coef: Vec<f64> = mesh.cell_faces(0).iter().map(|&f| dofs[f]).collect();

    let verts: Vec<[f64; 3]> = geom.vertices[..=dim].to_vec();
    let n = 7;
    let err = |x: &[f64; 3]| u.eval(&x[..dim]) - basis.eval(&coef, x);
    let grad_err = |x: &[f64; 3]| {
        let gu = u.gradient(&x[..dim]);
        let gi = basis.eval_gradient(&coef, x);
        [gu[0] - gi[0], gu[1] - gi[1], gu[2] - gi[2]]
    };
    let sq = |v: [f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];

    let u_semi = simplex_integral(&verts, n, |x| sq(u.gradient(&x[..dim]))).sqrt();
    let mut orthogonality: f64 = 0.0;
    let mut g = [[0.0; 3]; 4];
    basis.gradients(&geom.centroid, &mut g);
    for gi in g.iter().take(dim + 1) {
        let value = simplex_integral(&verts, n, |x| {
            let e = grad_err(x);
            e[0] * gi[0] + e[1] * gi[1] + e[2] * gi[2]
        });
        let scale = u_semi * (sq(*gi) * geom.measure).sqrt();
        orthogonality = orthogonality.max(value.abs() / scale);
    }

    let mut sample = InterpolationSample {
        degree,
        orthogonality,
        ..Default::default()
    };
    if degree < 2 {
        return sample;
    }
    let semi = simplex_integral(&verts, n, |x| sq(grad_err(x))).sqrt();
    let l2 = simplex_integral(&verts, n, |x| err(x).powi(2)).sqrt();
    sample.poincare = l2 / (interp_constant_poincare(&geom) * semi);
    for i in 0..=dim {
        let face: Vec<[f64; 3]> = (0..=dim).filter(|&k| k != i).map(|k| verts[k]).collect();
        let l2e = simplex_integral(&face, n, |x| err(x).powi(2)).sqrt();
        sample.trace = sample
            .trace
            .max(l2e / (interp_constant_trace(&geom, i) * semi));
    }
    sample
}

/// Worst relative deviation found on one (domain, element, level) case.
#[derive(Debug, Clone)]
pub struct OracleCase {
    pub case: String,
    pub n_dofs: usize,
    pub worst: f64,
}

fn field(domain: steklov_core::mesh::Domain, s: &str) -> steklov_core::fem::CoefficientField {
    steklov_core::fem::CoefficientField::with_auto_bound(
        s.parse().unwrap(),
        &domain.base_mesh().bounding_box(),
    )
    .unwrap()
}

/// Affine coefficient pair, bounded away from zero on the domain.
pub fn affine_coefficients(
    domain: steklov_core::mesh::Domain,
) -> (
    steklov_core::fem::CoefficientField,
    steklov_core::fem::CoefficientField,
) {
    if domain.dim() == 2 {
        (
            field(domain, "affine:2,0.3,-0.2"),
            field(domain, "affine:1.5,-0.25,0.4"),
        )
    } else {
        (
            field(domain, "affine:2,0.3,-0.2,0.1"),
            field(domain, "affine:1.5,-0.25,0.4,0.2"),
        )
    }
}

pub const KINDS: [steklov_core::fem::ElementKind; 3] = [
    steklov_core::fem::ElementKind::Cr,
    steklov_core::fem::ElementKind::Ecr,
    steklov_core::fem::ElementKind::P1,
];

/// Cell-by-cell double loop into dense matrices, integrating with the
/// collapsed Gauss-Legendre oracle.
pub fn dense_assembly(
    mesh: &SimplicialMesh,
    kind: ElementKind,
    alpha: &CoefficientField,
    beta: &CoefficientField,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let dofmap = build_dofmap(mesh, kind);
    let n = dofmap.n_dofs;
    let dim = mesh.dim();
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    for c in 0..mesh.n_cells() {
        let geom = ElementGeometry::new(mesh, c).unwrap();
        let basis = kind.basis(&geom).unwrap();
        let dofs = dofmap.cell_dofs(c);
        let verts: Vec<[f64; 3]> = geom.vertices[..=dim].to_vec();
        let value = |i: usize, x: &[f64; 3]| {
            let mut v = [0.0; 5];
            basis.values(x, &mut v);
            v[i]
        };
        let grad = |i: usize, x: &[f64; 3]| {
            let mut g = [[0.0; 3]; 5];
            basis.gradients(x, &mut g);
            g[i]
        };
        for i in 0..dofs.len() {
            for j in 0..dofs.len() {
                let s = simplex_integral(&verts, 5, |x| {
                    let (gi, gj) = (grad(i, x), grad(j, x));
                    alpha.eval(&x[..dim]) * (gi[0] * gj[0] + gi[1] * gj[1] + gi[2] * gj[2])
                        + beta.eval(&x[..dim]) * value(i, x) * value(j, x)
                });
                a[(dofs[i], dofs[j])] += s;
                for (face, &f) in mesh.cell_faces(c).iter().enumerate() {
                    if !mesh.is_boundary_face(f) {
                        continue;
                    }
                    let fv: Vec<[f64; 3]> =
                        (0..=dim).filter(|&k| k != face).map(|k| verts[k]).collect();
                    b[(dofs[i], dofs[j])] +=
                        simplex_integral(&fv, 5, |x| value(i, x) * value(j, x));
                }
            }
        }
    }
    (a, b)
}

pub fn max_diff(dense: &DMatrix<f64>, sparse: &DMatrix<f64>) -> f64 {
    let scale = dense.amax();
    (dense - sparse).amax() / scale
}

/// Sparse assembly against [`dense_assembly`] on every catalog mesh with
/// at most `cap` DOFs, with affine coefficients and exact quadrature.
pub fn assembly_oracle_sweep(cap: usize) -> Vec<OracleCase> {
    use steklov_core::assembly::{assemble, build_dofmap};
    use steklov_core::mesh::{generate, Domain};
    let mut out = Vec::new();
    for domain in Domain::ALL {
        let (alpha, beta) = affine_coefficients(domain);
        for kind in KINDS {
            for level in 0.. {
                let mesh = generate(domain, level).unwrap();
                let dofmap = build_dofmap(&mesh, kind);
                if dofmap.n_dofs > cap {
                    break;
                }
                // degree 6 integrates every affine-coefficient integrand exactly
                let sys = assemble(&mesh, &dofmap, &alpha, &beta, 6).unwrap();
                let (a, b) = dense_assembly(&mesh, kind, &alpha, &beta);
                out.push(OracleCase {
                    case: format!("{domain} {} level {level}", kind.name()),
                    n_dofs: dofmap.n_dofs,
                    worst: max_diff(&a, &sys.a.to_dense()).max(max_diff(&b, &sys.b.to_dense())),
                });
            }
        }
    }
    out
}

/// Sparse eigensolver against the dense oracle (up to four eigenvalues)
/// on every catalog mesh with at most `cap` DOFs, `alpha = beta = 1`.
pub fn solver_oracle_sweep(cap: usize) -> Vec<OracleCase> {
    use steklov_core::assembly::assemble_catalog;
    use steklov_core::fem::CoefficientField;
    use steklov_core::gevp::{dense_oracle, solve_smallest, DEFAULT_TOL};
    use steklov_core::mesh::Domain;
    use steklov_core::Error;
    let one = CoefficientField::constant(1.0).unwrap();
    let mut out = Vec::new();
    for domain in Domain::ALL {
        for kind in KINDS {
            for level in 0.. {
                let sys = assemble_catalog(domain, level, kind, &one, &one, 4)
                    .unwrap()
                    .1;
                if sys.n_dofs() > cap {
                    break;
                }
                let exact = match dense_oracle(&sys, 4) {
                    Err(Error::TooManyEigenvalues { available, .. }) => {
                        dense_oracle(&sys, available).unwrap()
                    }
                    other => other.unwrap(),
                };
                let sol = solve_smallest(&sys, exact.len(), DEFAULT_TOL).unwrap();
                let worst = (0..exact.len())
                    .map(|j| (sol.lambda(j) - exact.lambda(j)).abs() / exact.lambda(j))
                    .fold(0.0, f64::max);
                out.push(OracleCase {
                    case: format!("{domain} {} level {level}", kind.name()),
                    n_dofs: sys.n_dofs(),
                    worst,
                });
            }
        }
    }
    out
}
