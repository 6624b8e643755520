use nalgebra::{Cholesky, SymmetricEigen};

use super::{EigenPair, EigenSolution};
use crate::assembly::PencilSystem;
use crate::{Error, Result};

/// Largest pencil accepted by [`dense_oracle`].
pub const DENSE_CAP: usize = 2000;

/// Eigenvalues `mu` of `L^{-1} B L^{-T}` at or below this fraction of the
/// largest one are treated as `lambda = infinity`.
const INFINITE_CUTOFF: f64 = 1e-10;

/// Dense reference solver: reduces `B x = mu A x` with the Cholesky factor
/// `A = L L^T` to the standard problem `L^{-1} B L^{-T} y = mu y` and
/// returns the `k` smallest finite `lambda = 1 / mu`.
pub fn dense_oracle(system: &PencilSystem, k: usize) -> Result<EigenSolution> {
    let n = system.n_dofs();
    if n > DENSE_CAP {
        return Err(Error::DenseSizeCap { n, cap: DENSE_CAP });
    }
    let chol = Cholesky::new(system.a.to_dense())
        .ok_or_else(|| Error::Factorization("matrix A is not positive definite".into()))?;
    let l = chol.l();
    let b = system.b.to_dense();
    let linv_b = l
        .solve_lower_triangular(&b)
        .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&linv_b.transpose())
        .ok_or_else(|| Error::Factorization("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);

    let mu_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > INFINITE_CUTOFF * mu_max)
        .collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    if order.len() < k {
        return Err(Error::TooManyEigenvalues {
            requested: k,
            available: order.len(),
        });
    }
    let lt = l.transpose();
    let pairs = order[..k]
        .iter()
        .map(|&i| {
            let x = lt
                .solve_upper_triangular(&eig.eigenvectors.column(i).into_owned())
                .expect("nonsingular factor");
            EigenPair {
                lambda: 1.0 / eig.eigenvalues[i],
                vector: x.iter().copied().collect(),
            }
        })
        .collect();
    Ok(EigenSolution::new(system, pairs))
}
