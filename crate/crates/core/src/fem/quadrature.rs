//! Symmetric quadrature on the reference segment, triangle and tetrahedron.
//!
//! Points are barycentric; weights sum to one and are scaled by the
//! element (or face) measure on use.

use crate::{Error, Result};

pub const MAX_DEGREE: usize = 6;
pub const DEFAULT_DEGREE: usize = 4;

/// Integration domain relative to the mesh dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    Cell,
    Face,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Dimension of the simplex being integrated over.
    pub simplex_dim: usize,
    /// Barycentric coordinates, `simplex_dim + 1` entries used.
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        let n = self.simplex_dim + 1;
        self.points
            .iter()
            .map(move |p| &p[..n])
            .zip(self.weights.iter().copied())
    }
}

/// Rule exact to at least `degree` on cells (`kind = Cell`) or faces of a
/// `dim`-dimensional mesh.
pub fn quadrature(dim: usize, kind: QuadratureKind, degree: usize) -> Result<QuadratureRule> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedQuadrature(format!(
            "mesh dimension {dim}"
        )));
    }
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedQuadrature(format!(
            "degree {degree} (at most {MAX_DEGREE})"
        )));
    }
    let simplex_dim = match kind {
        QuadratureKind::Cell => dim,
        QuadratureKind::Face => dim - 1,
    };
    Ok(match simplex_dim {
        1 => gauss_segment(degree),
        2 => triangle(degree),
        _ => tetrahedron(degree),
    })
}

struct Builder {
    simplex_dim: usize,
    points: Vec<[f64; 4]>,
    weights: Vec<f64>,
}

impl Builder {
    fn new(simplex_dim: usize) -> Self {
        Self {
            simplex_dim,
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    /// Adds every distinct permutation of `bary` with weight `w`.
    fn orbit(mut self, bary: &[f64], w: f64) -> Self {
        let mut perms: Vec<Vec<f64>> = Vec::new();
        permutations(bary.to_vec(), 0, &mut perms);
        for p in perms {
            let mut pt = [0.0; 4];
            pt[..p.len()].copy_from_slice(&p);
            if !self.points.contains(&pt) {
                self.points.push(pt);
                self.weights.push(w);
            }
        }
        self
    }

    fn build(self, exact_degree: usize) -> QuadratureRule {
        QuadratureRule {
            simplex_dim: self.simplex_dim,
            points: self.points,
            weights: self.weights,
            exact_degree,
        }
    }
}

fn permutations(mut v: Vec<f64>, k: usize, out: &mut Vec<Vec<f64>>) {
    if k == v.len() {
        out.push(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v.clone(), k + 1, out);
        v.swap(k, i);
    }
}

fn gauss_segment(degree: usize) -> QuadratureRule {
    // Gauss-Legendre on [-1, 1]: (node, weight) for the non-negative nodes.
    let (table, exact): (&[(f64, f64)], usize) = match degree {
        0 | 1 => (&[(0.0, 2.0)], 1),
        2 | 3 => (&[(0.577_350_269_189_625_8, 1.0)], 3),
        4 | 5 => (
            &[
                (0.0, 0.888_888_888_888_888_9),
                (0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
            ],
            5,
        ),
        _ => (
            &[
                (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
                (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
            ],
            7,
        ),
    };
    let mut b = Builder::new(1);
    for &(x, w) in table {
        let t = 0.5 * (1.0 + x);
        b = b.orbit(&[t, 1.0 - t], 0.5 * w);
    }
    b.build(exact)
}

fn triangle(degree: usize) -> QuadratureRule {
    let b = Builder::new(2);
    match degree {
        0 | 1 => b.orbit(&[1.0 / 3.0; 3], 1.0).build(1),
        2 => b
            .orbit(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0)
            .build(2),
        3 | 4 => {
            let (a, wa) = (0.445_948_490_915_964_9, 0.223_381_589_678_011_5);
            let (c, wc) = (0.091_576_213_509_770_74, 0.109_951_743_655_321_9);
            b.orbit(&[a, a, 1.0 - 2.0 * a], wa)
                .orbit(&[c, c, 1.0 - 2.0 * c], wc)
                .build(4)
        }
        5 => {
            let (a, wa) = (0.470_142_064_105_115_1, 0.132_394_152_788_506_2);
            let (c, wc) = (0.101_286_507_323_456_3, 0.125_939_180_544_827_2);
            b.orbit(&[1.0 / 3.0; 3], 0.225)
                .orbit(&[a, a, 1.0 - 2.0 * a], wa)
                .orbit(&[c, c, 1.0 - 2.0 * c], wc)
                .build(5)
        }
        _ => {
            let (a, wa) = (0.249_286_745_170_910_4, 0.116_786_275_726_379_4);
            let (c, wc) = (0.063_089_014_491_502_23, 0.050_844_906_370_206_82);
            let (p, q, wpq) = (
                0.310_352_451_033_784_4,
                0.053_145_049_844_816_95,
                0.082_851_075_618_373_58,
            );
            b.orbit(&[a, a, 1.0 - 2.0 * a], wa)
                .orbit(&[c, c, 1.0 - 2.0 * c], wc)
                .orbit(&[p, q, 1.0 - p - q], wpq)
                .build(6)
        }
    }
}

fn tetrahedron(degree: usize) -> QuadratureRule {
    let b = Builder::new(3);
    match degree {
        0 | 1 => b.orbit(&[0.25; 4], 1.0).build(1),
        2 => {
            let a = (5.0 - 5f64.sqrt()) / 20.0;
            b.orbit(&[a, a, a, 1.0 - 3.0 * a], 0.25).build(2)
        }
        3..=5 => {
            // 14-point rule of degree five
            let (a, wa) = (0.092_735_250_310_891_23, 0.073_493_043_116_361_95);
            let (c, wc) = (0.310_885_919_263_300_6, 0.112_687_925_718_015_85);
            let (e, we) = (0.045_503_704_125_649_65, 0.042_546_020_777_081_466);
            b.orbit(&[a, a, a, 1.0 - 3.0 * a], wa)
                .orbit(&[c, c, c, 1.0 - 3.0 * c], wc)
                .orbit(&[e, e, 0.5 - e, 0.5 - e], we)
                .build(5)
        }
        _ => grundmann_moller(3, 3),
    }
}

/// Grundmann-Moller rule of degree `2s + 1` on the `n`-simplex.
fn grundmann_moller(n: usize, s: usize) -> QuadratureRule {
    let d = 2 * s + 1;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let n_fact = fact(n);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..=s {
        let denom = (d + n - 2 * i) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * 2f64.powi(-(2 * s as i32)) * denom.powi(d as i32)
            / (fact(i) * fact(d + n - i))
            * n_fact;
        for beta in compositions(s - i, n + 1) {
            let mut pt = [0.0; 4];
            for (slot, &bk) in pt.iter_mut().zip(&beta) {
                *slot = (2 * bk + 1) as f64 / denom;
            }
            points.push(pt);
            weights.push(w);
        }
    }
    QuadratureRule {
        simplex_dim: n,
        points,
        weights,
        exact_degree: d,
    }
}

/// All `parts`-tuples of non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}
