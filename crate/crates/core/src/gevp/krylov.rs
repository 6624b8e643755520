use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::{MatMut, Side};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{compensated, dot, EigenPair, EigenSolution};
use crate::assembly::{CsrMatrix, PencilSystem};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Ritz values `mu` at or below this fraction of the largest are
/// treated as `lambda = infinity`.
const INFINITE_CUTOFF: f64 = 1e-10;
/// A new Krylov direction is considered dependent when `A`-orthogonalization
/// removes all but this fraction of it.
const BREAKDOWN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Relative residual `||A u - lambda B u|| / ||A u||` required per pair.
    pub tol: f64,
    /// Start-vector seed. `None` derives one from the system's origin.
    pub seed: Option<u64>,
    /// Krylov subspace dimension. Defaults to `max(4k, k + 20)`.
    pub subspace: Option<usize>,
    /// Block size. Defaults to `min(k, 4)`.
    pub block: Option<usize>,
    pub max_restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            seed: None,
            subspace: None,
            block: None,
            max_restarts: 1000,
        }
    }
}

/// The `k` smallest finite eigenpairs of `A u = lambda B u`.
pub fn solve_smallest(system: &PencilSystem, k: usize, tol: f64) -> Result<EigenSolution> {
    solve_smallest_with(
        system,
        k,
        &SolveOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn solve_smallest_with(
    system: &PencilSystem,
    k: usize,
    opts: &SolveOptions,
) -> Result<EigenSolution> {
    let n = system.n_dofs();
    if !(opts.tol > 0.0 && opts.tol <= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} outside (0, 1e-6]",
            opts.tol
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::TooManyEigenvalues {
            requested: k,
            available: n,
        });
    }
    let llt = factorize(&system.a)?;
    let seed = opts.seed.unwrap_or_else(|| default_seed(system));
    let block = opts.block.unwrap_or(k.min(4)).clamp(1, n);
    let m = opts
        .subspace
        .unwrap_or((4 * k).max(k + 20))
        .max(k + block)
        .min(n);
    let block = block.min(m - k).max(1);

    let mut it = Lanczos {
        a: &system.a,
        b: &system.b,
        llt: &llt,
        rng: ChaCha8Rng::seed_from_u64(seed),
        v: Vec::with_capacity(m),
        bv: Vec::with_capacity(m),
        exhausted: false,
    };

    let mut next: Vec<Vec<f64>> = (0..block).map(|_| it.random_in_range()).collect();
    for restart in 0..=opts.max_restarts {
        // `next` holds directions not yet orthogonalized against the basis
        while it.v.len() < m {
            let room = m - it.v.len();
            let mut added = Vec::new();
            for w in next.drain(..).take(room) {
                added.push(it.append(w));
            }
            if it.v.len() >= m {
                break;
            }
            next = added.iter().map(|&j| it.apply(&it.v[j])).collect();
        }

        let ritz = it.rayleigh_ritz();
        let mu_max = ritz.values.first().copied().unwrap_or(0.0);
        let finite = ritz
            .values
            .iter()
            .filter(|&&mu| mu > INFINITE_CUTOFF * mu_max)
            .count();
        if finite < k && (it.exhausted || m == n) {
            return Err(Error::TooManyEigenvalues {
                requested: k,
                available: finite,
            });
        }

        let mut unconverged = Vec::new();
        let mut pairs = Vec::with_capacity(k);
        for j in 0..k {
            let mu = ritz.values[j];
            if !(mu > INFINITE_CUTOFF * mu_max) {
                unconverged.push(j);
                continue;
            }
            // one purifying step damps the rounding noise that the Ritz
            // vector carries along the large eigenvalues
            let u = it.apply_refined(&it.combine(&ritz.vectors, j));
            let (lambda, rel) = compensated::rayleigh_residual(&system.a, &system.b, &u);
            if !(rel <= opts.tol) {
                unconverged.push(j);
            }
            pairs.push(EigenPair { lambda, vector: u });
        }
        if unconverged.is_empty() {
            return Ok(EigenSolution::new(system, pairs));
        }
        if restart == opts.max_restarts {
            break;
        }

        // thick restart: keep the leading Ritz vectors and continue from
        // the operator applied to the unconverged wanted ones
        let keep = (k + (m - k) / 2).min(m - block);
        let seeds: Vec<usize> = unconverged
            .iter()
            .copied()
            .chain(k..m)
            .take(block)
            .collect();
        next = seeds
            .iter()
            .map(|&j| it.apply(&it.combine(&ritz.vectors, j)))
            .collect();
        it.restart(&ritz.vectors, keep);
    }
    Err(Error::NoConvergence(format!(
        "{k} eigenpairs not converged to {:e} after {} restarts",
        opts.tol, opts.max_restarts
    )))
}

/// Seed derived from the domain, level and element of the system.
pub(crate) fn default_seed(system: &PencilSystem) -> u64 {
    let d = &system.descriptor;
    let key = format!(
        "{}/{}/{}",
        d.domain.map(|x| x.name()).unwrap_or("-"),
        d.level.map(|l| l as i64).unwrap_or(-1),
        d.element.name()
    );
    // FNV-1a, stable across platforms and compiler versions
    key.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn factorize(a: &CsrMatrix) -> Result<Llt<usize, f64>> {
    let n = a.n();
    // symmetric, so the row-compressed layout doubles as column-compressed
    let symbolic = SymbolicSparseColMatRef::new_checked(n, n, a.row_ptr(), None, a.col_idx());
    let mat = SparseColMatRef::new(symbolic, a.values());
    mat.sp_cholesky(Side::Lower)
        .map_err(|e| Error::Factorization(format!("{e:?} (is A positive definite?)")))
}

struct Ritz {
    /// Descending.
    values: Vec<f64>,
    /// Columns are the coefficient vectors in the current basis.
    vectors: DMatrix<f64>,
}

struct Lanczos<'a> {
    a: &'a CsrMatrix,
    b: &'a CsrMatrix,
    llt: &'a Llt<usize, f64>,
    rng: ChaCha8Rng,
    /// `A`-orthonormal basis.
    v: Vec<Vec<f64>>,
    /// `B v` for every basis vector.
    bv: Vec<Vec<f64>>,
    exhausted: bool,
}

impl Lanczos<'_> {
    fn random(&mut self) -> Vec<f64> {
        (0..self.a.n())
            .map(|_| self.rng.random_range(-1.0..1.0))
            .collect()
    }

    /// Random vector mapped through the operator, so that it carries no
    /// component along the infinite eigenvalues.
    fn random_in_range(&mut self) -> Vec<f64> {
        let x = self.random();
        self.apply(&x)
    }

    /// `A^{-1} B x`
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.b.mul(x);
        self.solve(&mut y);
        y
    }

    /// `A^{-1} B x` with two steps of iterative refinement, the residuals
    /// computed in compensated arithmetic.
    fn apply_refined(&self, x: &[f64]) -> Vec<f64> {
        let rhs = self.b.mul(x);
        let mut y = rhs.clone();
        self.solve(&mut y);
        for _ in 0..2 {
            let mut r = compensated::pencil_residual(self.a, None, &y, Some(&rhs));
            self.solve(&mut r);
            for (yi, ri) in y.iter_mut().zip(&r) {
                *yi += ri;
            }
        }
        y
    }

    fn solve(&self, x: &mut [f64]) {
        let n = x.len();
        self.llt
            .solve_in_place(MatMut::from_column_major_slice_mut(x, n, 1));
    }

    fn a_norm(&self, w: &[f64]) -> f64 {
        dot(w, &self.a.mul(w)).max(0.0).sqrt()
    }

    /// Two passes of classical Gram-Schmidt in the `A`-inner product.
    fn orthogonalize(&self, w: &mut [f64]) {
        for _ in 0..2 {
            let aw = self.a.mul(w);
            let coef: Vec<f64> = self.v.iter().map(|v| dot(v, &aw)).collect();
            for (v, c) in self.v.iter().zip(coef) {
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= c * vi;
                }
            }
        }
    }

    /// Appends `w` to the basis, replacing it by a random direction when it
    /// is numerically dependent. Returns the new column index.
    fn append(&mut self, mut w: Vec<f64>) -> usize {
        for attempt in 0.. {
            let before = self.a_norm(&w);
            self.orthogonalize(&mut w);
            let after = self.a_norm(&w);
            if before > 0.0 && after > BREAKDOWN * before {
                for x in &mut w {
                    *x /= after;
                }
                break;
            }
            self.exhausted = true;
            // once the range of the operator is used up, unrestricted
            // directions only add Ritz values at mu = 0
            w = if attempt < 3 {
                self.random_in_range()
            } else {
                self.random()
            };
        }
        self.bv.push(self.b.mul(&w));
        self.v.push(w);
        self.v.len() - 1
    }

    fn rayleigh_ritz(&self) -> Ritz {
        let m = self.v.len();
        let mut h = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let x = 0.5 * (dot(&self.v[i], &self.bv[j]) + dot(&self.v[j], &self.bv[i]));
                h[(i, j)] = x;
                h[(j, i)] = x;
            }
        }
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
        Ritz {
            values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
            vectors,
        }
    }

    fn combine_from(basis: &[Vec<f64>], z: &DMatrix<f64>, j: usize) -> Vec<f64> {
        let mut u = vec![0.0; basis[0].len()];
        for (i, v) in basis.iter().enumerate() {
            let c = z[(i, j)];
            for (ui, vi) in u.iter_mut().zip(v) {
                *ui += c * vi;
            }
        }
        u
    }

    fn combine(&self, z: &DMatrix<f64>, j: usize) -> Vec<f64> {
        Self::combine_from(&self.v, z, j)
    }

    fn combine_b(&self, z: &DMatrix<f64>, j: usize) -> Vec<f64> {
        Self::combine_from(&self.bv, z, j)
    }

    fn restart(&mut self, z: &DMatrix<f64>, keep: usize) {
        let v: Vec<Vec<f64>> = (0..keep).map(|j| self.combine(z, j)).collect();
        let bv: Vec<Vec<f64>> = (0..keep).map(|j| self.combine_b(z, j)).collect();
        self.v = v;
        self.bv = bv;
    }
}
