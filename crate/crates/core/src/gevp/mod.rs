//! Generalized symmetric eigenproblem `A u = lambda B u` with `A` SPD and
//! `B` positive semidefinite.
//!
//! The sparse solver works on the flipped pencil `B x = mu A x`, whose
//! largest eigenvalues `mu = 1 / lambda` are the wanted ones, and runs a
//! thick-restart block Lanczos iteration on `x -> A^{-1} B x` in the
//! `A`-inner product. [`dense_oracle`] is an independent dense reference.

mod compensated;
mod dense;
mod krylov;

pub use dense::{dense_oracle, DENSE_CAP};
pub use krylov::{solve_smallest, solve_smallest_with, SolveOptions, DEFAULT_TOL};

use crate::assembly::PencilSystem;
use crate::{Error, Result};

/// Relative gap below which neighbouring eigenvalues share a cluster.
pub const CLUSTER_GAP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    /// `B`-normalized, largest-magnitude entry positive.
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    /// Ascending in `lambda`.
    pub pairs: Vec<EigenPair>,
    /// `||A u - lambda B u|| / ||A u||` per pair.
    pub residuals: Vec<f64>,
    /// Cluster index per pair, starting at 0.
    pub cluster_labels: Vec<usize>,
}

impl EigenSolution {
    pub(crate) fn new(system: &PencilSystem, mut pairs: Vec<EigenPair>) -> Self {
        pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        for p in &mut pairs {
            normalize(system, &mut p.vector);
        }
        let residuals = pairs
            .iter()
            .map(|p| residual_unchecked(system, p.lambda, &p.vector))
            .collect();
        let lambdas: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
        Self {
            cluster_labels: cluster_labels(&lambdas),
            pairs,
            residuals,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.pairs[j].lambda
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        &self.pairs[j].vector
    }

    /// Size of each cluster, in ascending order of the eigenvalues.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, &l) in self.cluster_labels.iter().enumerate() {
            if i == 0 || l != self.cluster_labels[i - 1] {
                out.push(1);
            } else {
                *out.last_mut().unwrap() += 1;
            }
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Groups sorted values whose relative gap is below [`CLUSTER_GAP`].
pub fn cluster_labels(sorted: &[f64]) -> Vec<usize> {
    let mut labels = Vec::with_capacity(sorted.len());
    let mut label = 0;
    for (i, &v) in sorted.iter().enumerate() {
        if i > 0 {
            let prev = sorted[i - 1];
            if (v - prev).abs() >= CLUSTER_GAP * v.abs().max(prev.abs()) {
                label += 1;
            }
        }
        labels.push(label);
    }
    labels
}

/// `||A u - lambda B u||_2 / ||A u||_2`, evaluated with compensated
/// dot products.
pub fn residual(system: &PencilSystem, lambda: f64, u: &[f64]) -> Result<f64> {
    if u.len() != system.n_dofs() {
        return Err(Error::InvalidArgument(format!(
            "vector has length {}, expected {}",
            u.len(),
            system.n_dofs()
        )));
    }
    let au = system.a.mul(u);
    if norm(&au) == 0.0 {
        return Err(Error::InvalidArgument(
            "residual of the zero vector is undefined".into(),
        ));
    }
    Ok(residual_unchecked(system, lambda, u))
}

fn residual_unchecked(system: &PencilSystem, lambda: f64, u: &[f64]) -> f64 {
    let au = compensated::matvec(&system.a, u);
    compensated::relative_residual(&system.a, &system.b, lambda, u, &au)
}

/// Scales to `u^T B u = 1` and flips the sign so that the entry of largest
/// magnitude is positive.
fn normalize(system: &PencilSystem, u: &mut [f64]) {
    let s = system.b.bilinear(u, u).sqrt();
    let pivot = u
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    let scale = if pivot < 0.0 { -1.0 / s } else { 1.0 / s };
    for v in u.iter_mut() {
        *v *= scale;
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
