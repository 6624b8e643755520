//! Dot products and residuals in compensated arithmetic (error-free
//! products via `mul_add` and TwoSum accumulation), accurate to roughly
//! twice the working precision.

use crate::assembly::CsrMatrix;

#[derive(Default, Clone, Copy)]
struct Acc {
    hi: f64,
    lo: f64,
}

impl Acc {
    #[inline]
    fn add_product(&mut self, x: f64, y: f64) {
        let p = x * y;
        let pe = x.mul_add(y, -p);
        let s = self.hi + p;
        let bb = s - self.hi;
        let se = (self.hi - (s - bb)) + (p - bb);
        self.hi = s;
        self.lo += se + pe;
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = Acc::default();
    for (a, b) in x.iter().zip(y) {
        acc.add_product(*a, *b);
    }
    acc.value()
}

/// Row `i` of `rhs - (M - lambda N) x` for each `i`, with the products
/// `lambda * N_ij` split exactly.
pub(crate) fn pencil_residual(
    m: &CsrMatrix,
    n: Option<(&CsrMatrix, f64)>,
    x: &[f64],
    rhs: Option<&[f64]>,
) -> Vec<f64> {
    (0..m.n())
        .map(|i| {
            let mut acc = Acc::default();
            if let Some(b) = rhs {
                acc.add_product(b[i], 1.0);
            }
            for (j, v) in m.row(i) {
                acc.add_product(-v, x[j]);
            }
            if let Some((nm, lambda)) = n {
                for (j, v) in nm.row(i) {
                    let t = lambda * v;
                    let te = lambda.mul_add(v, -t);
                    acc.add_product(t, x[j]);
                    acc.add_product(te, x[j]);
                }
            }
            acc.value()
        })
        .collect()
}

/// `M x`
pub(crate) fn matvec(m: &CsrMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = pencil_residual(m, None, x, None);
    for v in &mut y {
        *v = -*v;
    }
    y
}

/// `(u^T A u / u^T B u, ||A u - lambda B u|| / ||A u||)`
pub(crate) fn rayleigh_residual(a: &CsrMatrix, b: &CsrMatrix, u: &[f64]) -> (f64, f64) {
    let au = matvec(a, u);
    let bu = matvec(b, u);
    let lambda = dot(u, &au) / dot(u, &bu);
    (lambda, relative_residual(a, b, lambda, u, &au))
}

pub(crate) fn relative_residual(
    a: &CsrMatrix,
    b: &CsrMatrix,
    lambda: f64,
    u: &[f64],
    au: &[f64],
) -> f64 {
    let r = pencil_residual(a, Some((b, lambda)), u, None);
    super::norm(&r) / super::norm(au)
}
