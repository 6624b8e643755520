//! Post-processing of nonconforming eigenvalues into asymptotic lower bounds.
//!
//! For a CR eigenpair `(lambda_h, u_h)` the correction mass is
//!
//! ```text
//! M = delta / alpha0 * sum_K ( ||(alpha - I0 alpha) grad u_h||_K + C_hK ||beta u_h||_K )^2
//! ```
//!
//! with `C_hK` the CR Poincare constant of the cell, and the corrected value
//! is `lambda_c = lambda_h / (1 + M / lambda_h)`. For ECR only the first
//! term is kept.

use crate::assembly::DofMap;
use crate::fem::interp::cell_value;
use crate::fem::{
    interp_constant_poincare, quadrature, CoefficientField, ElementKind, LocalBasis,
    ProjectionMode, QuadratureKind, QuadratureRule, DEFAULT_DEGREE,
};
use crate::mesh::{ElementGeometry, SimplicialMesh};
use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionParams {
    /// Safety factor, must exceed 1.
    pub delta: f64,
    /// Lower bound of `alpha`; positive and not above the declared bound.
    pub alpha0: f64,
    pub quad_degree: usize,
}

impl CorrectionParams {
    pub fn new(delta: f64, alpha0: f64) -> Self {
        Self {
            delta,
            alpha0,
            quad_degree: DEFAULT_DEGREE,
        }
    }

    fn validate(&self, alpha: &CoefficientField) -> Result<()> {
        if !(self.delta > 1.0) || !self.delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "delta must be > 1, got {}",
                self.delta
            )));
        }
        if !(self.alpha0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha0 must be positive, got {}",
                self.alpha0
            )));
        }
        if self.alpha0 > alpha.lower_bound * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "alpha0 = {} exceeds the declared lower bound {} of alpha",
                self.alpha0, alpha.lower_bound
            )));
        }
        Ok(())
    }
}

/// Correction mass and the per-cell terms of the sum, before the
/// `delta / alpha0` scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionMass {
    pub m: f64,
    pub per_cell: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionReport {
    pub lambda_h: f64,
    pub m: f64,
    pub lambda_c: f64,
    pub lambda_avg: f64,
    /// Unscaled per-cell terms, `M = delta / alpha0 * sum(per_cell)`.
    pub per_cell: Vec<f64>,
    pub delta: f64,
    pub alpha0: f64,
}

impl CorrectionReport {
    pub fn new(lambda_h: f64, mass: CorrectionMass, params: &CorrectionParams) -> Result<Self> {
        let lambda_c = correct(lambda_h, mass.m)?;
        Ok(Self {
            lambda_h,
            m: mass.m,
            lambda_c,
            lambda_avg: average_estimate(lambda_h, lambda_c),
            per_cell: mass.per_cell,
            delta: params.delta,
            alpha0: params.alpha0,
        })
    }
}

/// Correction mass for a CR eigenvector.
pub fn compute_m_cr(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    u_h: &[f64],
    alpha: &CoefficientField,
    beta: &CoefficientField,
    params: &CorrectionParams,
) -> Result<CorrectionMass> {
    check_inputs(mesh, dofmap, u_h, ElementKind::Cr, alpha, params)?;
    let rule = quadrature(mesh.dim(), QuadratureKind::Cell, params.quad_degree)?;
    cell_sum(mesh, dofmap, u_h, params, |geom, basis, coef| {
        let alpha_bar = cell_value(alpha, geom, &rule, ProjectionMode::Mean);
        let grad = basis.eval_gradient(coef, &geom.centroid);
        let grad_norm = norm3(&grad);
        let (mut osc, mut bu) = (0.0, 0.0);
        for (b, w) in rule.iter() {
            let x = geom.point(b);
            let d = alpha.eval(&x[..geom.dim]) - alpha_bar;
            let v = beta.eval(&x[..geom.dim]) * basis.eval(coef, &x);
            osc += w * d * d;
            bu += w * v * v;
        }
        let t = grad_norm * (osc * geom.measure).sqrt()
            + interp_constant_poincare(geom) * (bu * geom.measure).sqrt();
        t * t
    })
}

/// Correction mass for an ECR eigenvector (no `beta` term).
pub fn compute_m_ecr(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    u_h: &[f64],
    alpha: &CoefficientField,
    params: &CorrectionParams,
) -> Result<CorrectionMass> {
    check_inputs(mesh, dofmap, u_h, ElementKind::Ecr, alpha, params)?;
    if alpha.coefficient.is_constant() {
        return Ok(CorrectionMass {
            m: 0.0,
            per_cell: vec![0.0; mesh.n_cells()],
        });
    }
    let rule = quadrature(mesh.dim(), QuadratureKind::Cell, params.quad_degree)?;
    cell_sum(mesh, dofmap, u_h, params, |geom, basis, coef| {
        ecr_cell_term(geom, basis, coef, alpha, &rule)
    })
}

/// `||(alpha - I0 alpha) grad u||^2_K` by quadrature.
pub(crate) fn ecr_cell_term(
    geom: &ElementGeometry,
    basis: &LocalBasis,
    coef: &[f64],
    alpha: &CoefficientField,
    rule: &QuadratureRule,
) -> f64 {
    let alpha_bar = cell_value(alpha, geom, rule, ProjectionMode::Mean);
    let s: f64 = rule
        .iter()
        .map(|(b, w)| {
            let x = geom.point(b);
            let d = alpha.eval(&x[..geom.dim]) - alpha_bar;
            let g = basis.eval_gradient(coef, &x);
            w * d * d * dot3(&g, &g)
        })
        .sum();
    s * geom.measure
}

/// Dispatches on the element of `dofmap`. Conforming P1 gets `M = 0`.
pub fn compute_m(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    u_h: &[f64],
    alpha: &CoefficientField,
    beta: &CoefficientField,
    params: &CorrectionParams,
) -> Result<CorrectionMass> {
    match dofmap.kind {
        ElementKind::Cr => compute_m_cr(mesh, dofmap, u_h, alpha, beta, params),
        ElementKind::Ecr => compute_m_ecr(mesh, dofmap, u_h, alpha, params),
        ElementKind::P1 => Ok(CorrectionMass {
            m: 0.0,
            per_cell: vec![0.0; mesh.n_cells()],
        }),
    }
}

/// `lambda_h / (1 + M / lambda_h)`
pub fn correct(lambda_h: f64, m: f64) -> Result<f64> {
    if !(lambda_h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda_h must be positive, got {lambda_h}"
        )));
    }
    if !(m >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "M must be nonnegative, got {m}"
        )));
    }
    Ok(lambda_h / (1.0 + m / lambda_h))
}

pub fn average_estimate(lambda_h: f64, lambda_c: f64) -> f64 {
    0.5 * (lambda_h + lambda_c)
}

/// `|(lambda_ref - lambda_c) - (lambda_ref - lambda_h) - lambda_h M / (lambda_h + M)|`
pub fn theorem32_residual(lambda_ref: f64, lambda_h: f64, lambda_c: f64, m: f64) -> f64 {
    ((lambda_ref - lambda_c) - (lambda_ref - lambda_h) - lambda_h * m / (lambda_h + m)).abs()
}

fn check_inputs(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    u_h: &[f64],
    kind: ElementKind,
    alpha: &CoefficientField,
    params: &CorrectionParams,
) -> Result<()> {
    params.validate(alpha)?;
    if dofmap.kind != kind {
        return Err(Error::InvalidArgument(format!(
            "expected a {kind} vector, got {}",
            dofmap.kind
        )));
    }
    if dofmap.n_cells() != mesh.n_cells() || u_h.len() != dofmap.n_dofs {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} does not match {} DOFs",
            u_h.len(),
            dofmap.n_dofs
        )));
    }
    Ok(())
}

fn cell_sum(
    mesh: &SimplicialMesh,
    dofmap: &DofMap,
    u_h: &[f64],
    params: &CorrectionParams,
    term: impl Fn(&ElementGeometry, &LocalBasis, &[f64]) -> f64,
) -> Result<CorrectionMass> {
    let mut per_cell = Vec::with_capacity(mesh.n_cells());
    let mut coef = Vec::with_capacity(dofmap.n_local);
    for c in 0..mesh.n_cells() {
        let geom = ElementGeometry::new(mesh, c)?;
        let basis = dofmap.kind.basis(&geom)?;
        coef.clear();
        coef.extend(dofmap.cell_dofs(c).iter().map(|&d| u_h[d]));
        per_cell.push(term(&geom, &basis, &coef));
    }
    let sum: f64 = per_cell.iter().sum();
    Ok(CorrectionMass {
        m: params.delta / params.alpha0 * sum,
        per_cell,
    })
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}
